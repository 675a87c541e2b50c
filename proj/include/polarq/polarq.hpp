#pragma once

#include "polarq/circuits.hpp"
#include "polarq/entangle.hpp"
#include "polarq/error.hpp"
#include "polarq/fits.hpp"
#include "polarq/lattice.hpp"
#include "polarq/manybody.hpp"
#include "polarq/pendular.hpp"

namespace polarq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace polarq
