#pragma once

#include "tracelab/classifier.hpp"
#include "tracelab/config.hpp"
#include "tracelab/errors.hpp"
#include "tracelab/evaluator.hpp"
#include "tracelab/field.hpp"
#include "tracelab/format.hpp"
#include "tracelab/ft_mult_char.hpp"
#include "tracelab/hyp_classifier.hpp"
#include "tracelab/hypergeometric.hpp"
#include "tracelab/kloosterman.hpp"
#include "tracelab/numeric.hpp"
#include "tracelab/parallel.hpp"
#include "tracelab/pgl2.hpp"
#include "tracelab/poly.hpp"
#include "tracelab/profile.hpp"
#include "tracelab/rep_theory.hpp"
#include "tracelab/trace_table.hpp"
#include "tracelab/transforms.hpp"
