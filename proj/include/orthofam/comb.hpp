#pragma once

#include "orthofam/comb/comb.hpp"
#include "orthofam/comb/full_support.hpp"
