#pragma once

#include "milnor/polyring/interval.hpp"
#include "milnor/polyring/parse.hpp"
#include "milnor/polyring/polynomial.hpp"
