#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "optocool/cavity_models.hpp"
#include "optocool/design.hpp"
#include "optocool/figures.hpp"
#include "optocool/semiclassical.hpp"
#include "optocool/sweep.hpp"
#include "optocool/table.hpp"
#include "optocool/units.hpp"

namespace optocool {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class Command { fixed_points, spectrum, damping, phonons, sweep, optimize, design, figure };

std::string_view to_string(Command c);
Command command_from_string(std::string_view name);

// Line-oriented `[section]` / `key = value` text; `#` and `;` start comments.
class ConfigDocument {
 public:
  struct Entry {
    std::string value;
    int line = 0;  // 0: set programmatically
  };

  static ConfigDocument parse(std::string_view text);

  // "section.key=value"
  void apply_override(std::string_view assignment);
  void set(const std::string& section, const std::string& key, std::string value, int line = 0);

  const Entry* find(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;
  const std::map<std::string, std::map<std::string, Entry>>& sections() const { return sections_; }

 private:
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

struct SpectrumOptions {
  Range omega{-3.0, 3.0, 601, false};
  bool transform = false;  // numerical transform instead of the closed form
  BranchPolicy policy = BranchPolicy::stable_only;

  friend bool operator==(const SpectrumOptions&, const SpectrumOptions&) = default;
};

struct OptimizeOptions {
  Interval delta_range{-0.5, 0.5};
  BranchPolicy policy = BranchPolicy::plus_only;
  int scan_points = 401;
  std::optional<double> margin;  // drive = margin * E_bif(delta); empty keeps model drive

  friend bool operator==(const OptimizeOptions&, const OptimizeOptions&) = default;
};

struct OutputSpec {
  std::string path;  // empty: stdout
  OutputFormat format = OutputFormat::csv;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

// Everything a run needs, in internal gamma units.
struct RunSpec {
  Command command = Command::fixed_points;
  units::UnitSystem units;
  ModelDescriptor model = ModelDescriptor::josephson(0.0, 0.0, 0.06);
  std::optional<MechanicalMode> mech;
  SweepGrid grid;
  std::vector<Quantity> outputs;
  SpectrumOptions spectrum;
  OptimizeOptions optimize;
  DesignOptions design;
  FigureId figure = FigureId::f1b;
  FigureParams figure_params;
  OutputSpec output;

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

// Builds a validated RunSpec. `command` overrides run.command.
RunSpec parse_config(const ConfigDocument& doc, std::optional<Command> command = std::nullopt,
                     std::optional<FigureId> figure = std::nullopt);
RunSpec parse_config(std::string_view text);

// Canonical document in internal units; parse_config(to_config(s)) == s.
std::string to_config(const RunSpec& spec);

// JSON meta block: tool, version, command, the canonical config text and a
// structured echo.
nlohmann::ordered_json run_meta(const RunSpec& spec);

}  // namespace optocool
