// Minimum distortions and the strictly causal curve of a Gaussian channel with state.
#include <cstdio>

#include "cdtrade/cdtrade.hpp"

int main() {
    using namespace cdtrade;
    const GaussianParams g{1.0, 1.0, 1.0};
    std::printf("D* strictly causal %.6f  causal %.6f  oblivious %.6f\n",
                gaussian_dstar(g, GaussianMode::StrictlyCausal), gaussian_dstar(g, GaussianMode::Causal),
                gaussian_dstar(g, GaussianMode::Oblivious));
    for (const auto& p : gaussian_curve(g, 6).points) std::printf("  D = %.4f  C = %.6f\n", p.distortion, p.rate);
}
