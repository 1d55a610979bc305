#pragma once

#include <stdexcept>

namespace mbloch {

// Inputs place the model outside its physical operating regime (below
// threshold where a lasing state was requested, unreachable instability,
// lossless cavity, ...). The CLI maps this to its own exit code so scripted
// sweeps can tell regime failures from genuine solver errors.
class regime_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mbloch
