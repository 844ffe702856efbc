#pragma once

// Umbrella header: word-level differential privacy for symbolic
// trajectories via permute-and-flip class sampling and uniform in-class
// automaton sampling.

#include "pfword/accuracy.hpp"
#include "pfword/class_distribution.hpp"
#include "pfword/errors.hpp"
#include "pfword/hamming_nfa.hpp"
#include "pfword/io.hpp"
#include "pfword/markov.hpp"
#include "pfword/mechanisms.hpp"
#include "pfword/oracle.hpp"
#include "pfword/random.hpp"
#include "pfword/spectrum.hpp"
#include "pfword/sweep.hpp"
#include "pfword/word.hpp"
