// Numeric strictly causal curve of a binary channel with state next to the closed form.
#include <cstdio>

#include "cdtrade/cdtrade.hpp"

int main() {
    using namespace cdtrade;
    const BscParams b{0.25, 0.25};
    SolverOptions opts;
    opts.multistart = 20;
    const auto numeric = solve_cd_curve(make_bsc_channel(b.p, b.q), DistortionTable::hamming(2),
                                        Mode::StrictlyCausal, opts);
    std::printf("numeric D* %.4f, closed-form D* %.4f\n", numeric.dstar(), bsc_dstar_strictly_causal(b));
    for (double d : linear_grid(0.2, 0.3, 5))
        std::printf("  D = %.3f  solver %.5f  closed form %.5f\n", d, numeric.rate_at(d).value_or(0.0),
                    bsc_cd_strictly_causal(b, d));
}
