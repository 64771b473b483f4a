#pragma once

#include "orthofam/diagonal/condition.hpp"
#include "orthofam/diagonal/registry.hpp"
#include "orthofam/diagonal/script.hpp"
#include "orthofam/diagonal/solve.hpp"
