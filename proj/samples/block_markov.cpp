// Block Markov simulation with U = S on a noisy binary channel, at two block lengths.
#include <cstdio>

#include "cdtrade/cdtrade.hpp"

int main() {
    using namespace cdtrade;
    Preset p = find_preset("sim-lossless");
    p.set("trials", 10);
    const auto ch = preset_channel(p);
    const auto design = preset_design(p, ch);
    auto prm = preset_sim_params(p, ch, design);
    for (std::size_t n : {12, 16}) {
        prm.n = n;
        const auto r = simulate(ch, design, DistortionTable::hamming(2), prm);
        std::printf("n = %zu  distortion %.4f  E2 %llu/%llu blocks\n", n, r.empirical_distortion,
                    static_cast<unsigned long long>(r.events.e2), static_cast<unsigned long long>(r.decoded_blocks));
    }
}
