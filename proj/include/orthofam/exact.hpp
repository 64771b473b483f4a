#pragma once

#include "orthofam/exact/bigrat.hpp"
#include "orthofam/exact/interval.hpp"
#include "orthofam/exact/linalg.hpp"
#include "orthofam/exact/quadratic_field.hpp"
#include "orthofam/exact/radical.hpp"
#include "orthofam/exact/radical_sum.hpp"
#include "orthofam/exact/serialize.hpp"
#include "orthofam/exact/squarefree.hpp"
