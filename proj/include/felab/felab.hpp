#pragma once

#include "felab/analysis.hpp"
#include "felab/arith.hpp"
#include "felab/constructions.hpp"
#include "felab/embed.hpp"
#include "felab/error.hpp"
#include "felab/eval.hpp"
#include "felab/largeness.hpp"
#include "felab/lazy_set.hpp"
#include "felab/report.hpp"
#include "felab/sequences.hpp"
#include "felab/set_expr.hpp"
#include "felab/set_file.hpp"
#include "felab/sieve_cache.hpp"
#include "felab/verdict.hpp"
