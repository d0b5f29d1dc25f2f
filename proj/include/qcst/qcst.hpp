#pragma once

#include "qcst/bases.hpp"
#include "qcst/errors.hpp"
#include "qcst/experiments.hpp"
#include "qcst/matcore.hpp"
#include "qcst/matrix_io.hpp"
#include "qcst/recovery.hpp"
#include "qcst/rng.hpp"
#include "qcst/sensing.hpp"
#include "qcst/states.hpp"
#include "qcst/tolerances.hpp"
#include "qcst/version.hpp"
