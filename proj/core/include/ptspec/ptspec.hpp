#pragma once

#include "ptspec/closed_form.hpp"
#include "ptspec/errors.hpp"
#include "ptspec/model.hpp"
#include "ptspec/observables.hpp"
#include "ptspec/polynomial.hpp"
#include "ptspec/shift_solver.hpp"
#include "ptspec/tdse.hpp"
