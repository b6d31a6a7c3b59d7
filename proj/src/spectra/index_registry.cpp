#include "specsel/spectra/index_registry.hpp"

#include <fstream>
#include <sstream>

#include "specsel/error.hpp"

namespace specsel {

namespace {

// Stand-in set of narrow-band vegetation indices that reduce to the four
// arithmetic operators. Formulas follow their usual published forms; indices
// needing sqrt/log are left out.
constexpr std::string_view kDefaultRegistry = R"(# name      expression
# greenness / structure
NDVI        (R800 - R670) / (R800 + R670)
SR          R800 / R670
GNDVI       (R800 - R550) / (R800 + R550)
EVI         2.5 * (R800 - R670) / (R800 + 6 * R670 - 7.5 * R450 + 1)
SAVI        1.5 * (R800 - R670) / (R800 + R670 + 0.5)
OSAVI       1.16 * (R800 - R670) / (R800 + R670 + 0.16)
WDRVI       (0.1 * R800 - R670) / (0.1 * R800 + R670)
DVI         R800 - R670
TVI         0.5 * (120 * (R750 - R550) - 200 * (R670 - R550))
MTVI1       1.2 * (1.2 * (R800 - R550) - 2.5 * (R670 - R550))
# red edge
NDRE        (R790 - R720) / (R790 + R720)
RENDVI      (R750 - R705) / (R750 + R705)
mSR705      (R750 - R445) / (R705 - R445)
mND705      (R750 - R705) / (R750 + R705 - 2 * R445)
SR705       R750 / R705
VOG1        R740 / R720
VOG2        (R734 - R747) / (R715 + R726)
VOG3        (R734 - R747) / (R715 + R720)
MTCI        (R754 - R709) / (R709 - R681)
Datt        (R850 - R710) / (R850 - R680)
CIrededge   R780 / R710 - 1
# chlorophyll
MCARI       ((R700 - R670) - 0.2 * (R700 - R550)) * (R700 / R670)
TCARI       3 * ((R700 - R670) - 0.2 * (R700 - R550) * (R700 / R670))
CIgreen     R780 / R550 - 1
GI          R554 / R677
PSSRa       R800 / R680
PSSRb       R800 / R635
PSNDa       (R800 - R680) / (R800 + R680)
# pigments / stress
PRI         (R531 - R570) / (R531 + R570)
ARI         1 / R550 - 1 / R700
CRI1        1 / R510 - 1 / R550
CRI2        1 / R510 - 1 / R700
SIPI        (R800 - R445) / (R800 - R680)
PSRI        (R680 - R500) / R750
NPCI        (R680 - R430) / (R680 + R430)
# water
WI          R900 / R970
)";

}  // namespace

std::string_view default_registry_text() { return kDefaultRegistry; }

IndexDefinition IndexDefinition::make(std::string name, std::string_view formula) {
  IndexDefinition def{std::move(name), Expression::parse(formula), {}};
  def.wavelengths_used = def.expression.wavelengths();
  return def;
}

IndexRegistry IndexRegistry::standard() { return parse(kDefaultRegistry); }

IndexRegistry IndexRegistry::parse(std::string_view text) {
  IndexRegistry registry;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto name_end = line.find_first_of(" \t", first);
    if (name_end == std::string::npos)
      fail(ErrorCode::parse, "registry line " + std::to_string(number) + ": missing expression");
    std::string name = line.substr(first, name_end - first);
    std::string formula = line.substr(name_end);
    try {
      registry.add(IndexDefinition::make(name, formula));
    } catch (const ParseError& e) {
      fail(ErrorCode::parse,
           "registry line " + std::to_string(number) + " (" + name + "): " + e.what());
    }
  }
  return registry;
}

IndexRegistry IndexRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open registry file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void IndexRegistry::add(IndexDefinition definition) {
  if (definition.name.empty()) fail(ErrorCode::invalid_argument, "index name must not be empty");
  if (find(definition.name))
    fail(ErrorCode::invalid_argument, "duplicate index name '" + definition.name + "'");
  definitions_.push_back(std::move(definition));
}

const IndexDefinition* IndexRegistry::find(std::string_view name) const {
  for (const auto& d : definitions_)
    if (d.name == name) return &d;
  return nullptr;
}

std::string IndexRegistry::to_text() const {
  std::string out;
  for (const auto& d : definitions_) out += d.name + "  " + d.expression.to_string() + "\n";
  return out;
}

std::vector<BoundExpression> IndexRegistry::bind(const BandGrid& grid) const {
  std::vector<BoundExpression> bound;
  bound.reserve(definitions_.size());
  for (const auto& d : definitions_) {
    try {
      bound.emplace_back(d.expression, grid);
    } catch (const Error& e) {
      fail(e.code(), "index '" + d.name + "': " + e.what());
    }
  }
  return bound;
}

}  // namespace specsel
