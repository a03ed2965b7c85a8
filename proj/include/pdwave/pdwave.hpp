#pragma once

// Umbrella header: low-PAPR OFDM joint radar-communication waveform design
// via per-subcarrier phase offsets, with the ADMM designer and the
// communication/sensing evaluation stack.

#include "pdwave/admm.hpp"
#include "pdwave/comm.hpp"
#include "pdwave/harness.hpp"
#include "pdwave/io.hpp"
#include "pdwave/qpsk.hpp"
#include "pdwave/rng.hpp"
#include "pdwave/sensing.hpp"
#include "pdwave/spectral.hpp"
#include "pdwave/types.hpp"
#include "pdwave/waveform.hpp"
