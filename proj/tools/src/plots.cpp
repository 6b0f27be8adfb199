#include "mix/cli/plots.hpp"

#include <regex>

namespace mix::cli {

namespace {

const char* kPreamble =
    "set datafile separator \",\"\n"
    "set key autotitle columnhead\n"
    "set terminal pngcairo size 1400,800 font \",11\"\n";

std::string map_panel(const std::string& file, const std::string& title) {
  return "set title \"" + title +
         "\"\n"
         "set view map\nset size ratio -1\nset xrange [-3:3]\nset yrange [-3:3]\n"
         "set xlabel \"x_1\"\nset ylabel \"x_2\"\n"
         "splot \"" +
         file + "\" using 1:2:3 with pm3d notitle\n";
}

std::string reset_panel() { return "unset view\nset size noratio\nset autoscale\n"; }

}  // namespace

std::vector<std::pair<std::string, std::string>> plot_scripts(const std::set<std::string>& files) {
  auto has = [&](const std::string& f) { return files.count(f) > 0; };
  std::vector<std::pair<std::string, std::string>> out;

  if (has("vind_boson.csv") && has("vind_fermion.csv")) {
    std::string s = kPreamble;
    s += "set output \"fig1_effective_potentials.png\"\nset multiplot layout 1,2\n";
    for (const std::string sp : {"fermion", "boson"}) {
      const std::string f = "vind_" + sp + ".csv";
      s += "set title \"" + sp + "s\"\nset xrange [-4:4]\nset yrange [0:10]\nset xlabel \"x\"\n";
      s += "plot \"" + f + "\" using 1:4 with lines lw 2 title \"V_eff\", \\\n";
      s += "     \"" + f + "\" using 1:($6+$5) with lines dt 2 title \"SMF\", \\\n";
      s += "     \"" + f + "\" using 1:6 with lines dt 3 title \"x^2/2\"\n";
    }
    s += "unset multiplot\n";
    out.emplace_back("fig1_effective_potentials.gp", s);
  }

  if (has("hind_boson.csv") && has("hind_fermion.csv")) {
    std::string s = kPreamble;
    s += "set output \"fig2_induced.png\"\nset multiplot layout 2,3\nset palette rgb 33,13,10\n";
    for (const std::string sp : {"fermion", "boson"}) {
      const std::string g2 = "g2_" + sp + "_full.csv";
      if (has(g2)) {
        s += map_panel(g2, "g_2 " + sp + "s");
      } else {
        s += "set multiplot next\n";
      }
      s += map_panel("hind_" + sp + ".csv", "H_ind " + sp + "s");
      s += reset_panel();
      s += "set title \"H_ind cuts " + sp + "s\"\nset xrange [-6:6]\nset xlabel \"r, R\"\nunset ylabel\n";
      s += "plot \"hind_" + sp + "_cut_r.csv\" using 1:2 with lines title \"R = 0\", \\\n";
      s += "     \"hind_" + sp + "_cut_R.csv\" using 1:2 with lines dt 2 title \"r = 0\"\n";
    }
    s += "unset multiplot\n";
    out.emplace_back("fig2_induced.gp", s);
  }

  bool fig3 = true;
  for (const std::string sp : {"fermion", "boson"})
    for (const std::string p : {"full", "effective"})
      for (const std::string suffix : {"", "_diag", "_offdiag"}) fig3 = fig3 && has("g2_" + sp + "_" + p + suffix + ".csv");
  if (fig3) {
    std::string s = kPreamble;
    s += "set output \"fig3_g2.png\"\nset multiplot layout 2,2\nset palette rgb 33,13,10\n";
    for (const std::string sp : {"fermion", "boson"}) {
      s += map_panel("g2_" + sp + "_effective.csv", "g_2 effective " + sp + "s");
      s += reset_panel();
      s += "set title \"g_2 cuts " + sp + "s\"\nset xrange [-3:3]\nset yrange [0:*]\nset xlabel \"x_1\"\n";
      s += "plot \"g2_" + sp + "_full_diag.csv\" using 1:3 with lines lc rgb \"brown\" title \"diagonal, full\", \\\n";
      s += "     \"g2_" + sp + "_effective_diag.csv\" using 1:3 with lines dt 2 lc rgb \"brown\" title \"diagonal, effective\", \\\n";
      s += "     \"g2_" + sp + "_full_offdiag.csv\" using 1:3 with lines lc rgb \"blue\" title \"off-diagonal, full\", \\\n";
      s += "     \"g2_" + sp + "_effective_offdiag.csv\" using 1:3 with lines dt 2 lc rgb \"blue\" title \"off-diagonal, effective\"\n";
    }
    s += "unset multiplot\n";
    out.emplace_back("fig3_g2.gp", s);
  }
  return out;
}

std::vector<std::string> script_inputs(const std::string& script) {
  static const std::regex quoted("\"([^\"]+\\.csv)\"");
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(script.begin(), script.end(), quoted); it != std::sregex_iterator(); ++it) {
    out.push_back((*it)[1].str());
  }
  return out;
}

}  // namespace mix::cli
