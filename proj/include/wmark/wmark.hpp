#pragma once

// Grayscale image watermarking: LSB and reversible difference expansion in
// the pixel domain, QIM in Haar sub-bands and 8x8 DCT blocks, plus quality
// and robustness metrics.

#include "wmark/error.hpp"
#include "wmark/frequency.hpp"
#include "wmark/image.hpp"
#include "wmark/metrics.hpp"
#include "wmark/spatial.hpp"
#include "wmark/transforms.hpp"
