#pragma once

#include <string>
#include <vector>

#include "burstcoord/sweep.hpp"

namespace burstcoord {

// Line chart of mean NMI against lambda, one line per detector, with a
// shaded band of +/- one standard deviation. When `timestamp` is non-empty it
// is embedded as a comment.
std::string sweep_svg(const std::vector<SweepRow>& rows, const std::vector<Detector>& detectors,
                      const std::string& timestamp = {});

}  // namespace burstcoord
