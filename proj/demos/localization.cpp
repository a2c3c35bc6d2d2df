// Width of a Gaussian packet in the underdamped oscillator for several
// initial widths, and the time after which it stays below its initial value.

#include <fmt/format.h>

#include "dampath/dampath.hpp"

int main() {
  const auto spec = dampath::SystemSpec::oscillator(0.2, 0.5);
  fmt::print("regime: {}\n", dampath::to_string(dampath::classify(spec).kind));

  for (double sigma0 : {0.3, 0.5, 1.0}) {
    const auto packet = dampath::make_packet(spec, 1.0, sigma0);
    fmt::print("\nsigma0 = {}\n   t   sigma_t/sigma0   peak\n", sigma0);
    for (double t = 0.0; t <= 50.0; t += 5.0)
      fmt::print("{:5.1f}  {:14.6f}  {:8.4f}\n", t, dampath::sigma_t(spec, packet, t) / sigma0,
                 dampath::peak(spec, packet, t));
    if (const auto onset = dampath::localization_onset(spec, packet, 50.0))
      fmt::print("below sigma0 from t = {:.3f}\n", *onset);
    else
      fmt::print("still wider than sigma0 at t = 50\n");
  }
}
