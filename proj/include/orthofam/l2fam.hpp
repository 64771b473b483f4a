#pragma once

#include "orthofam/l2fam/staircase.hpp"
#include "orthofam/l2fam/unequal_tree.hpp"
