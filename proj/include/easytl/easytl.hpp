#pragma once

#include "easytl/error.hpp"
#include "easytl/linalg.hpp"
#include "easytl/alignment.hpp"
#include "easytl/lp_solver.hpp"
#include "easytl/classifier.hpp"
#include "easytl/pipeline.hpp"
#include "easytl/dataio.hpp"
