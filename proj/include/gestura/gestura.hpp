#pragma once

#include "gestura/acoustics.hpp"
#include "gestura/coordination.hpp"
#include "gestura/error.hpp"
#include "gestura/experiments.hpp"
#include "gestura/flow.hpp"
#include "gestura/inventory.hpp"
#include "gestura/io.hpp"
#include "gestura/parser.hpp"
#include "gestura/syllable_graph.hpp"
#include "gestura/synthesis.hpp"
#include "gestura/trajectory.hpp"
#include "gestura/wav.hpp"
