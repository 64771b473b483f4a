#pragma once

#include "orthofam/fullsupport/build.hpp"
#include "orthofam/fullsupport/hadamard.hpp"
#include "orthofam/fullsupport/precond.hpp"
#include "orthofam/fullsupport/sign_condition.hpp"
