// Regenerates the profile fixtures under data/.

#include <filesystem>
#include <iostream>

#include "reebfol/families.hpp"
#include "reebfol/profile_io.hpp"
#include "reebfol/surgery.hpp"

using namespace reebfol;

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir);
  const Profile lambda0 = standard_profile(1.0);
  save_profile(dir / "lambda0.json", lambda0);
  save_profile(dir / "mirrored.json", mirrored_standard_profile(1.0));
  save_profile(dir / "half_lutz.json", lutz_twist(lambda0, TwistKind::Half, 0.5));
  save_profile(dir / "full_lutz.json", lutz_twist(lambda0, TwistKind::Full, 0.5));

  SurgeryPlan plan;
  plan.matrix = {1, 1, 0, 1};
  plan.delta = 0.3;
  plan.epsilon = 0.8;
  plan.twist = TwistKind::Half;
  const SurgeryResult surgery = perform_surgery(lambda0, plan);
  save_profile(dir / "surgery_q1.json", surgery.profile);
  std::cerr << "surgery_q1: " << surgery.core.layout << '\n';

  save_profile(dir / "hopf_chart.json", hopf_chart_profile());
  save_profile(dir / "stabilized_chart.json", stabilized_chart_profile());
  return 0;
}
