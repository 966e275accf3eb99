#pragma once

#include "fredholm/error.hpp"
#include "fredholm/bessel.hpp"
#include "fredholm/grid.hpp"
#include "fredholm/field.hpp"
#include "fredholm/norms.hpp"
#include "fredholm/operators.hpp"
#include "fredholm/classify.hpp"
#include "fredholm/green.hpp"
#include "fredholm/weyl.hpp"
#include "fredholm/verification.hpp"
