#pragma once

// Umbrella header.

#include "cdtrade/error.hpp"
#include "cdtrade/rng.hpp"
#include "cdtrade/probcore/simplex.hpp"
#include "cdtrade/probcore/joint_pmf.hpp"
#include "cdtrade/probcore/info.hpp"
#include "cdtrade/probcore/kv_text.hpp"
#include "cdtrade/probcore/channel.hpp"
#include "cdtrade/probcore/assemble.hpp"
#include "cdtrade/estimator.hpp"
#include "cdtrade/design.hpp"
#include "cdtrade/design_io.hpp"
#include "cdtrade/cdsolve/capacity.hpp"
#include "cdtrade/cdsolve/evaluate.hpp"
#include "cdtrade/cdsolve/options.hpp"
#include "cdtrade/cdsolve/curve.hpp"
#include "cdtrade/cdsolve/solve.hpp"
#include "cdtrade/closedform/gaussian.hpp"
#include "cdtrade/closedform/bsc.hpp"
#include "cdtrade/closedform/injective.hpp"
#include "cdtrade/closedform/curves.hpp"
#include "cdtrade/blockmarkov/typicality.hpp"
#include "cdtrade/blockmarkov/codebook.hpp"
#include "cdtrade/blockmarkov/simulate.hpp"
#include "cdtrade/cardtrick.hpp"
#include "cdtrade/presets.hpp"
#include "cdtrade/io/export.hpp"
