#ifndef SPT_PRESETS_HPP
#define SPT_PRESETS_HPP

#include <string>

#include "spt/derived.hpp"
#include "spt/self_consistent.hpp"
#include "spt/trap_dynamics.hpp"

namespace spt::presets {

// Crossover wavelength of the trace presets. The measured crossover is
// 1.3 um to two figures; it is pinned a notch above the 1.30 um exposure
// wavelength so sub-gap trapping dominates there, as the observed negative
// steps require. (The ab-initio interband edge from the shipped table is
// 1.279 um, 2% below; the wavelength pipeline reports that value.)
inline constexpr double kLambdaGapUm = 1.31;

// Illumination geometry: ~5 mm spot (Gaussian 1/e^2 diameter) on the 1 um
// gate window.
BeamGeometry reference_beam();

// Channel defaults shared by the trace presets. Thresholds: +0.1 V bare,
// -0.5 V after a full soak (100 donors at -6 mV each); G0 calibrated so the
// fully soaked channel carries 0.6 nA at the Fig. 3 bias point.
ChannelModel reference_channel();
inline constexpr double kFig3GateBiasV = -0.43;
inline constexpr int kDonorTotal = 100;

// Fig. 3: 1.3 um exposure of the soaked device; staircase of single-electron
// steps down to pinch-off with occasional positive spikes. The absorbed rate
// is the text's 1 photon/s; the figure caption's 0.3 /s variant ships as
// fig3_caption().
TraceConfig fig3();
TraceConfig fig3_caption();

// Fig. 4: 1.0 -> 1.8 um sweep over 80 s starting from a partially soaked,
// unpinched channel.
TraceConfig fig4();

// Fig. 5: balanced two-level switching, shutter open 10 s in every 50 s.
TraceConfig fig5();

// Fig. 1: band diagram of the soaked reference stack at zero bias.
SolverConfig fig1_solver();

}  // namespace spt::presets

#endif
