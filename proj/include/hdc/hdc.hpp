#pragma once

// Umbrella header.

#include "hdc/core.hpp"
#include "hdc/crawler_categorical.hpp"
#include "hdc/crawler_hybrid.hpp"
#include "hdc/crawler_numeric.hpp"
#include "hdc/datagen.hpp"
#include "hdc/hard_instances.hpp"
#include "hdc/harness.hpp"
#include "hdc/io.hpp"
#include "hdc/server.hpp"
