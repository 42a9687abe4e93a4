#pragma once

#include "osnorm/errors.hpp"
#include "osnorm/evaluators.hpp"
#include "osnorm/experiments.hpp"
#include "osnorm/format.hpp"
#include "osnorm/interp.hpp"
#include "osnorm/json_io.hpp"
#include "osnorm/linalg.hpp"
#include "osnorm/parallel.hpp"
#include "osnorm/ruan.hpp"
#include "osnorm/seqspace.hpp"
#include "osnorm/structure.hpp"
#include "osnorm/twist.hpp"
#include "osnorm/verify.hpp"
