// Regenerates the canned scenario and model files.
//
//   make_assets <dir>

#include <filesystem>
#include <iostream>

#include "mdep/inequalities.hpp"
#include "mdep/lhv.hpp"
#include "mdep/serialize.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_assets <dir>\n";
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    try {
        const auto bell = mdep::tsirelson_scenario();
        mdep::write_text_file(dir / "bell-optimal.json", mdep::chsh_scenario_to_json(bell));
        mdep::write_text_file(dir / "chsh-reference.json", mdep::chsh_scenario_to_json(mdep::reference_scenario()));
        mdep::write_text_file(dir / "brans.json",
                              mdep::model_to_json(mdep::brans_construct(mdep::chsh_quantum(bell), mdep::SettingSpace(2, 2))));

        const auto pentagram = mdep::pentagram_scenario();
        mdep::write_text_file(dir / "kcbs-pentagram.json", mdep::kcbs_scenario_to_json(pentagram));
        const auto& v1 = pentagram.vectors()[0];
        const mdep::KcbsScenario on_v1(pentagram.vectors(), mdep::StateVector{v1[0], v1[1], v1[2]});
        mdep::write_text_file(dir / "kcbs-state-v1.json", mdep::kcbs_scenario_to_json(on_v1));
    } catch (const std::exception& e) {
        std::cerr << "make_assets: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
