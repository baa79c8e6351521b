// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cuntzwave/laurent.hpp"
#include "cuntzwave/filterbank.hpp"
#include "cuntzwave/fixtures.hpp"
#include "cuntzwave/cuntz_rep.hpp"
#include "cuntzwave/cascade.hpp"
#include "cuntzwave/wold.hpp"
#include "cuntzwave/permutative.hpp"
#include "cuntzwave/dilation.hpp"
#include "cuntzwave/index.hpp"
#include "cuntzwave/json_io.hpp"
