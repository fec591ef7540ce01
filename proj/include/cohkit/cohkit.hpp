#pragma once
// Umbrella header.

#include "cohkit/bipartite.hpp"
#include "cohkit/coherence.hpp"
#include "cohkit/config.hpp"
#include "cohkit/csv.hpp"
#include "cohkit/econometrics.hpp"
#include "cohkit/errors.hpp"
#include "cohkit/ipc.hpp"
#include "cohkit/matrix.hpp"
#include "cohkit/network_io.hpp"
#include "cohkit/records.hpp"
#include "cohkit/relatedness.hpp"
#include "cohkit/serialize.hpp"
#include "cohkit/spanning_tree.hpp"
#include "cohkit/synth.hpp"
#include "cohkit/version.hpp"
