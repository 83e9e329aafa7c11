#pragma once

// Runs a shell command and captures its combined output and exit code.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cdtrade::testproc {

struct Result {
    int exit_code = -1;
    std::string output;
};

inline Result run(const std::string& cmd) {
    Result r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed: " + cmd);
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

inline std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return {};
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

inline std::string quote(const std::string& s) { return "'" + s + "'"; }

}  // namespace cdtrade::testproc
