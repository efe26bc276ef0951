#pragma once

#include "adfischer/errors.hpp"
#include "adfischer/linalg.hpp"
#include "adfischer/ad_matrix.hpp"
#include "adfischer/inequalities.hpp"
#include "adfischer/random.hpp"
#include "adfischer/generation.hpp"
#include "adfischer/search.hpp"
#include "adfischer/matrix_io.hpp"
#include "adfischer/report.hpp"
#include "adfischer/commands.hpp"
