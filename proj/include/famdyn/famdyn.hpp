#pragma once

// Umbrella header for the whole library.

#include "famdyn/comparisons.hpp"
#include "famdyn/corpus.hpp"
#include "famdyn/detectors.hpp"
#include "famdyn/dynamics.hpp"
#include "famdyn/errors.hpp"
#include "famdyn/parallel.hpp"
#include "famdyn/report.hpp"
#include "famdyn/rng.hpp"
#include "famdyn/space.hpp"
#include "famdyn/spec_io.hpp"
#include "famdyn/verdict.hpp"
#include "famdyn/version.hpp"
