/*
   Copyright 2026 The lxray Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// lxray: phantoms, forward projection, reconstruction and counting reports.
//
// Exit codes: 0 ok, 1 other failure or failed report, 2 precondition,
// 3 budget exceeded, 4 malformed input file.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace lxray;

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (out) {
    io::write_file_atomic(*out, text);
  } else {
    std::cout << text;
    std::cout.flush();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete X-ray transform on Z^d: forward, inverse, counting."};
  app.require_subcommand(1);

  // phantom
  cli::PhantomOptions ph;
  std::optional<std::string> ph_out;
  bool ph_csv = false;
  auto* phantom = app.add_subcommand("phantom", "Write a test grid function on B_r");
  phantom->add_option("--kind", ph.kind, "point | disc | checker | random-int")
      ->check(CLI::IsMember({"point", "disc", "checker", "random-int"}));
  phantom->add_option("--d", ph.d, "Dimension (>= 2)")->check(CLI::Range(2, 16));
  phantom->add_option("--r", ph.r, "Support radius, e.g. 8, 5/2, 2.5");
  phantom->add_option("--seed", ph.seed, "Seed for random-int");
  phantom->add_option("--disc-radius", ph.disc_radius, "Disc radius (default 5r/8)");
  phantom->add_option("--out", ph_out, "Output file (default stdout)");
  phantom->add_flag("--csv", ph_csv, "Write CSV rows instead of JSON");

  // forward
  std::string fw_grid;
  cli::ForwardOptions fw;
  std::optional<std::string> fw_out;
  auto* forward = app.add_subcommand("forward", "Project a grid along a line family");
  forward->add_option("--grid", fw_grid, "Grid file")->required();
  forward
      ->add_option("--family", fw.family,
                   "tstar | tstar-plane A B | annulus ALPHA BETA | free DIRFILE")
      ->expected(1, 3);
  forward->add_option("--plane", fw.plane, "Plane A B for annulus families")->expected(2);
  forward->add_option("--weight", fw.weight, "const C | cell-chord")->expected(1, 2);
  forward->add_flag("--continuous", fw.continuous, "Integrate the unit-cell interpretation");
  forward->add_option("--out", fw_out, "Output file (default stdout)");

  // recon
  std::string rc_sino;
  cli::ReconOptions rc;
  std::optional<std::string> rc_out, rc_residuals;
  bool rc_csv = false;
  auto* recon = app.add_subcommand("recon", "Reconstruct a grid from a sinogram");
  recon->add_option("--sino", rc_sino, "Sinogram file")->required();
  recon->add_option("--r", rc.r, "Support radius (default: smallest covering the data points)");
  recon->add_option("--weight", rc.weight, "const C | cell-chord")->expected(1, 2);
  recon->add_option("--one-point", rc.one_point, "Direction file for the one-point formula");
  recon->add_flag("--layer", rc.layer, "Layer-by-layer continuum approximation");
  recon->add_option("--iterate", rc.iterate, "Correction iterations from the layer solution");
  recon->add_option("--residuals", rc_residuals, "Residual CSV (default stderr)");
  recon->add_option("--out", rc_out, "Output file (default stdout)");
  recon->add_flag("--csv", rc_csv, "Write CSV rows instead of JSON");

  // csv
  std::string csv_grid;
  std::optional<std::string> csv_out;
  auto* csv = app.add_subcommand("csv", "Export a grid file as CSV");
  csv->add_option("--grid", csv_grid, "Grid file")->required();
  csv->add_option("--out", csv_out, "Output file (default stdout)");

  // count
  auto* count = app.add_subcommand("count", "Exhaustive counting reports");
  count->require_subcommand(1);
  std::string ct_r = "1";
  std::size_t ct_d = 2;
  std::int64_t ct_n = 1, ct_R = 1;
  auto* tmin = count->add_subcommand("tmin", "Lines through >= 2 lattice points of B_r");
  tmin->add_option("--r", ct_r, "Radius")->required();
  tmin->add_option("--d", ct_d, "Dimension (2..4)");
  auto* farey = count->add_subcommand("farey", "Primitive directions with max |coord| <= n");
  farey->add_option("--n", ct_n, "Order")->required()->check(CLI::PositiveNumber);
  farey->add_option("--d", ct_d, "Dimension");
  auto* separation = count->add_subcommand("separation", "Projection separation check");
  separation->add_option("--R", ct_R, "Radius")->required();
  separation->add_option("--d", ct_d, "Dimension (2 or 3)");
  auto* bounds = count->add_subcommand("bounds", "Line-count bounds in d = 2");
  bounds->add_option("--r", ct_r, "Radius")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc_parse = app.exit(e);
    return rc_parse == 0 ? cli::kOk : cli::kPrecondition;
  }

  try {
    if (*phantom) {
      const GridFunction f = cli::make_phantom(ph);
      emit(ph_out, ph_csv ? io::grid_to_csv(f) : io::grid_to_string(f));
    } else if (*forward) {
      const GridFunction f = io::grid_from_string(io::read_file(fw_grid));
      const Sinogram g = cli::run_forward(f, fw);
      emit(fw_out, io::sinogram_to_string(g, f.dim()));
    } else if (*recon) {
      const std::string text = io::read_file(rc_sino);
      const Sinogram g = io::sinogram_from_string(text);
      const auto res = cli::run_recon(g, io::sinogram_dim(text), rc);
      if (rc.iterate > 0) {
        const std::string table = cli::residuals_csv(res.residuals);
        if (rc_residuals)
          io::write_file_atomic(*rc_residuals, table);
        else
          std::cerr << table;
      }
      emit(rc_out, rc_csv ? io::grid_to_csv(res.f) : io::grid_to_string(res.f));
    } else if (*csv) {
      emit(csv_out, io::grid_to_csv(io::grid_from_string(io::read_file(csv_grid))));
    } else if (*count) {
      cli::CountResult res;
      if (*tmin) res = cli::count_tmin(Rational::parse(ct_r), ct_d);
      else if (*farey) res = cli::count_farey(ct_n, ct_d);
      else if (*separation) res = cli::count_separation(ct_R, ct_d);
      else res = cli::count_bounds(Rational::parse(ct_r));
      std::cout << res.report.dump(2) << "\n";
      std::cerr << res.table;
      return res.passed ? cli::kOk : cli::kFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "lxray: " << e.what() << "\n";
    return cli::exit_code_for(e);
  }
  return cli::kOk;
}
