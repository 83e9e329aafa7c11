#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cdtrade/error.hpp"

namespace cdtrade {

/// Minimal line-oriented key/value document shared by every text input.
///
/// Grammar (one item per line, '#' starts a comment, blank lines ignored):
///
///     key = token token ...        inline value
///     key =                        block value: following lines that do not
///     row tokens ...               contain '=' are collected as rows
///
/// Keys are case-sensitive and must be unique.
class KvDocument {
public:
    struct Entry {
        std::size_t line = 0;
        std::vector<std::string> inline_tokens;
        std::vector<std::vector<std::string>> rows;
        std::vector<std::size_t> row_lines;
    };

    static KvDocument parse(std::istream& in, std::string source) {
        KvDocument doc;
        doc.source_ = std::move(source);
        std::string raw;
        std::size_t lineno = 0;
        Entry* current = nullptr;
        while (std::getline(in, raw)) {
            ++lineno;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            auto tokens = split(raw);
            if (tokens.empty()) continue;
            if (auto eq = raw.find('='); eq != std::string::npos) {
                auto key_tokens = split(raw.substr(0, eq));
                if (key_tokens.size() != 1) throw ParseError(doc.source_, lineno, "expected 'key = value'");
                const auto& key = key_tokens.front();
                if (doc.entries_.count(key)) throw ParseError(doc.source_, lineno, "duplicate key '" + key + "'");
                Entry e;
                e.line = lineno;
                e.inline_tokens = split(raw.substr(eq + 1));
                doc.order_.push_back(key);
                current = &doc.entries_.emplace(key, std::move(e)).first->second;
            } else {
                if (!current) throw ParseError(doc.source_, lineno, "data row before any key");
                current->rows.push_back(std::move(tokens));
                current->row_lines.push_back(lineno);
            }
        }
        return doc;
    }

    static KvDocument parse_string(const std::string& text, std::string source = "<string>") {
        std::istringstream in(text);
        return parse(in, std::move(source));
    }

    static KvDocument parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open '" + path + "'");
        return parse(in, path);
    }

    const std::string& source() const noexcept { return source_; }
    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const std::vector<std::string>& keys() const noexcept { return order_; }

    const Entry& entry(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ParseError(source_, 0, "missing key '" + key + "'");
        return it->second;
    }

    std::string get_string(const std::string& key) const {
        const auto& e = entry(key);
        if (e.inline_tokens.size() != 1) throw ParseError(source_, e.line, "'" + key + "' expects one value");
        return e.inline_tokens.front();
    }

    std::size_t get_size(const std::string& key) const {
        const auto& e = entry(key);
        if (e.inline_tokens.size() != 1) throw ParseError(source_, e.line, "'" + key + "' expects one integer");
        return to_size(e.inline_tokens.front(), e.line);
    }

    double get_real(const std::string& key) const {
        const auto& e = entry(key);
        if (e.inline_tokens.size() != 1) throw ParseError(source_, e.line, "'" + key + "' expects one number");
        return to_real(e.inline_tokens.front(), e.line);
    }

    std::vector<double> get_reals(const std::string& key) const {
        const auto& e = entry(key);
        std::vector<double> out;
        for (const auto& t : e.inline_tokens) out.push_back(to_real(t, e.line));
        return out;
    }

    /// All numbers of a block value, row by row; every row must hold `width` numbers.
    std::vector<double> get_real_rows(const std::string& key, std::size_t expected_rows, std::size_t width) const {
        const auto& e = entry(key);
        if (!e.inline_tokens.empty()) throw ParseError(source_, e.line, "'" + key + "' expects rows on following lines");
        if (e.rows.size() != expected_rows)
            throw ParseError(source_, e.line, "'" + key + "' expects " + std::to_string(expected_rows) +
                                                  " rows, found " + std::to_string(e.rows.size()));
        std::vector<double> out;
        for (std::size_t r = 0; r < e.rows.size(); ++r) {
            if (e.rows[r].size() != width)
                throw ParseError(source_, e.row_lines[r], "row has " + std::to_string(e.rows[r].size()) +
                                                              " entries, expected " + std::to_string(width));
            for (const auto& t : e.rows[r]) out.push_back(to_real(t, e.row_lines[r]));
        }
        return out;
    }

    /// Every integer of a block value, flattened across rows.
    std::vector<std::size_t> get_size_block(const std::string& key, std::size_t expected_count) const {
        const auto& e = entry(key);
        std::vector<std::size_t> out;
        for (const auto& t : e.inline_tokens) out.push_back(to_size(t, e.line));
        for (std::size_t r = 0; r < e.rows.size(); ++r)
            for (const auto& t : e.rows[r]) out.push_back(to_size(t, e.row_lines[r]));
        if (out.size() != expected_count)
            throw ParseError(source_, e.line, "'" + key + "' expects " + std::to_string(expected_count) +
                                                  " integers, found " + std::to_string(out.size()));
        return out;
    }

    double to_real(const std::string& token, std::size_t line) const {
        try {
            std::size_t used = 0;
            double v = std::stod(token, &used);
            if (used == token.size()) return v;
        } catch (const std::exception&) {
        }
        throw ParseError(source_, line, "not a number: '" + token + "'");
    }

    std::size_t to_size(const std::string& token, std::size_t line) const {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size())
            throw ParseError(source_, line, "not a non-negative integer: '" + token + "'");
        return v;
    }

private:
    static std::vector<std::string> split(const std::string& s) {
        std::istringstream in(s);
        std::vector<std::string> out;
        for (std::string t; in >> t;) out.push_back(t);
        return out;
    }

    std::string source_;
    std::map<std::string, Entry> entries_;
    std::vector<std::string> order_;
};

}  // namespace cdtrade
