// Umbrella header.
#pragma once

#include "milnork/cli.hpp"
#include "milnork/common.hpp"
#include "milnork/factor.hpp"
#include "milnork/field.hpp"
#include "milnork/field_maps.hpp"
#include "milnork/framed.hpp"
#include "milnork/framing_matrix.hpp"
#include "milnork/milnor.hpp"
#include "milnork/reciprocity.hpp"
#include "milnork/selftest.hpp"
