#pragma once

#include <vector>

#include "beliefsim/chain_model.hpp"

namespace fixtures {

// n=2, P(H=T)=0.8; cond order A|T, A|F, B|TT, B|TF, B|FT, B|FF.
inline beliefsim::ChainModel m0() { return beliefsim::ChainModel(2, 0.8, {0.7, 0.4, 0.9, 0.5, 0.2, 0.6}); }

inline beliefsim::ChainModel uniform_model(int n) {
    return beliefsim::ChainModel(n, 0.5, std::vector<double>(beliefsim::parameter_count(n) - 1, 0.5));
}

} // namespace fixtures
