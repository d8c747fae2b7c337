#pragma once

// Umbrella header: torsion detection for simplicial complexes by comparing
// homology dimensions over R and over finite fields F_p.

#include "torscan/errors.hpp"
#include "torscan/exact_linalg.hpp"
#include "torscan/matrix.hpp"
#include "torscan/norm_bounds.hpp"
#include "torscan/pipeline_emulator.hpp"
#include "torscan/rank_sketch.hpp"
#include "torscan/rng.hpp"
#include "torscan/simplicial_complex.hpp"
#include "torscan/torsion_detector.hpp"
