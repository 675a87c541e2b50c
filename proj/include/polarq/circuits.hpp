#pragma once

#include "polarq/circuits/circuit.hpp"
#include "polarq/circuits/cluster.hpp"
#include "polarq/circuits/diagonal.hpp"
#include "polarq/circuits/iqp.hpp"
#include "polarq/circuits/nmr.hpp"
