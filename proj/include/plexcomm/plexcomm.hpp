#pragma once

// Communicability-based community detection on multiplex networks:
// correlation-layer ingestion, inter-layer intensity optimization, per-layer
// threshold-sweep detection, and partition comparison.

#include "plexcomm/errors.hpp"
#include "plexcomm/layer.hpp"
#include "plexcomm/multiplex.hpp"
#include "plexcomm/communicability.hpp"
#include "plexcomm/omega_search.hpp"
#include "plexcomm/community.hpp"
#include "plexcomm/partition_metrics.hpp"
#include "plexcomm/ingest.hpp"
#include "plexcomm/synth.hpp"
#include "plexcomm/io.hpp"
#include "plexcomm/pipeline.hpp"
