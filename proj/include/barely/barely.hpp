#pragma once

#include "barely/adjuster.hpp"
#include "barely/chain_core.hpp"
#include "barely/errors.hpp"
#include "barely/generators.hpp"
#include "barely/index_value.hpp"
#include "barely/io.hpp"
#include "barely/line_operator.hpp"
#include "barely/rng.hpp"
#include "barely/set_bits.hpp"
