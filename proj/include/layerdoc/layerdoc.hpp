#pragma once

// Umbrella header: pulls in the whole library.

#include "layerdoc/annotation.hpp"
#include "layerdoc/catalog.hpp"
#include "layerdoc/compositor.hpp"
#include "layerdoc/config.hpp"
#include "layerdoc/contour.hpp"
#include "layerdoc/cvat_xml.hpp"
#include "layerdoc/error.hpp"
#include "layerdoc/histogram.hpp"
#include "layerdoc/image.hpp"
#include "layerdoc/io.hpp"
#include "layerdoc/labels.hpp"
#include "layerdoc/manifest.hpp"
#include "layerdoc/metrics.hpp"
#include "layerdoc/pipeline.hpp"
#include "layerdoc/planner.hpp"
#include "layerdoc/rng.hpp"
#include "layerdoc/similarity.hpp"
#include "layerdoc/version.hpp"
