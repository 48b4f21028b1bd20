#ifndef GRAPHASE_GRAPHASE_HPP
#define GRAPHASE_GRAPHASE_HPP

#include "graphase/graph.hpp"
#include "graphase/spectral.hpp"
#include "graphase/evolution.hpp"
#include "graphase/retrieval.hpp"
#include "graphase/counterexamples.hpp"
#include "graphase/experiments.hpp"
#include "graphase/io.hpp"

#endif
