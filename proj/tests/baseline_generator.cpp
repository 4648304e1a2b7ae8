// Regenerates the committed curve baselines under tests/baselines/. Run it
// only when a deliberate behavioral change invalidates the frozen curves:
//
//   ./build/tests/baseline_generator <output-dir>

#include <cstdio>

#include "qfn/csv.hpp"
#include "regression_curves.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: baseline_generator <output-dir>\n");
        return 2;
    }
    const std::string dir = argv[1];
    for (const regression::Curve& curve : regression::all_curves()) {
        const std::string path = dir + "/" + curve.name + ".csv";
        qfn::CsvWriter csv(path, curve.columns);
        for (const auto& row : curve.rows) {
            csv.row(row);
        }
        csv.close();
        std::printf("wrote %s (%zu rows)\n", path.c_str(), curve.rows.size());
    }
    return 0;
}
