#pragma once

#include "orthofam/kunen/kunen.hpp"
