#pragma once

#include "intgarch/error.hpp"
#include "intgarch/process.hpp"

#include <string>

namespace testing {

inline intgarch::ModelParams model_one() {
    return intgarch::ModelParams::make(1.8147, 0.0906, {0.0318}, {0.374}, {0.1265});
}

inline intgarch::ModelParams model_two() {
    return intgarch::ModelParams::make(1.2134, 0.071, {0.1833}, {0.2334}, {0.1732});
}

/// Message of the intgarch::Error thrown by f, or "" when nothing is thrown.
template <typename F>
std::string error_of(F&& f) {
    try {
        f();
    } catch (const intgarch::Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace testing
