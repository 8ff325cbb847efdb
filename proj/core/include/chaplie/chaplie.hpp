#pragma once

#include "chaplie/builtin_algebras.hpp"
#include "chaplie/chaplygin_model.hpp"
#include "chaplie/dynamics.hpp"
#include "chaplie/errors.hpp"
#include "chaplie/hamiltonization.hpp"
#include "chaplie/lie_core.hpp"
#include "chaplie/root_engine.hpp"
#include "chaplie/serialization.hpp"
