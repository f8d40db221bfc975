#pragma once

#include "screamkit/audio.hpp"
#include "screamkit/cnn.hpp"
#include "screamkit/dataset.hpp"
#include "screamkit/dsp.hpp"
#include "screamkit/features.hpp"
#include "screamkit/fft.hpp"
#include "screamkit/metrics.hpp"
#include "screamkit/model_io.hpp"
#include "screamkit/pipeline.hpp"
#include "screamkit/rng.hpp"
#include "screamkit/segmentation.hpp"
#include "screamkit/svg.hpp"
#include "screamkit/svm.hpp"
#include "screamkit/tsne.hpp"
#include "screamkit/util.hpp"
