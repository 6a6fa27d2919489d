// pv_toy_gen.cpp — regenerates the committed pv_toy fixture after re-verifying,
// with the positivity monitor itself, that its generator loses positivity
// in-span with a clean negative eigenvalue slope.
#include <fstream>
#include <iostream>

#include "nmqj/model_json.hpp"
#include "nmqj/oracle.hpp"
#include "nmqj/registry.hpp"

int main(int argc, char** argv) {
    const std::string out = argc > 1 ? argv[1] : "data/pv_toy.json";
    try {
        const nmqj::MasterEquationModel model = nmqj::builtin_model("pv_toy");
        const nmqj::DensityTrajectory traj =
            nmqj::integrate_master(model, model.initial_density(), 1e-3, 10);
        const nmqj::PositivityReport report = nmqj::positivity_monitor(traj, model);
        if (!report.violated || !report.slope_check || !(*report.slope_check < 0.0)) {
            std::cerr << "pv_toy does not violate positivity cleanly; refusing to write the "
                         "fixture\n";
            return 1;
        }
        std::cout << "pv_toy: lowest eigenvalue crosses zero at t0 = " << *report.t0
                  << " with slope " << *report.slope_check << "\n";
        std::ofstream file(out, std::ios::binary);
        if (!file) {
            std::cerr << "cannot write '" << out << "'\n";
            return 1;
        }
        file << nmqj::canonical_model_json(model);
        std::cout << "wrote " << out << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
