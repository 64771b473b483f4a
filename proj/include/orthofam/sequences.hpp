#pragma once

#include "orthofam/sequences/handle.hpp"
#include "orthofam/sequences/inner.hpp"
