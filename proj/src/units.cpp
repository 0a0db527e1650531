#include "dimerstate/units.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "dimerstate/errors.hpp"

namespace dimerstate::units {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

EnergyUnit parse_energy_unit(std::string_view tag) {
  const std::string t = lower(tag);
  if (t == "ha" || t == "hartree" || t == "eh") return EnergyUnit::Hartree;
  if (t == "ry" || t == "rydberg") return EnergyUnit::Rydberg;
  if (t == "ev") return EnergyUnit::ElectronVolt;
  if (t == "k" || t == "kelvin") return EnergyUnit::Kelvin;
  throw InputError("unknown energy unit tag '" + std::string(tag) + "'");
}

VolumeUnit parse_volume_unit(std::string_view tag) {
  const std::string t = lower(tag);
  if (t == "bohr3" || t == "bohr^3" || t == "au3" || t == "a.u.^3")
    return VolumeUnit::Bohr3;
  if (t == "a3" || t == "a^3" || t == "ang3" || t == "angstrom3")
    return VolumeUnit::Angstrom3;
  throw InputError("unknown volume unit tag '" + std::string(tag) + "'");
}

PressureUnit parse_pressure_unit(std::string_view tag) {
  const std::string t = lower(tag);
  if (t == "gpa") return PressureUnit::GPa;
  if (t == "ha/bohr3" || t == "hartree/bohr3" || t == "ha/bohr^3")
    return PressureUnit::HartreePerBohr3;
  throw InputError("unknown pressure unit tag '" + std::string(tag) + "'");
}

std::string to_string(EnergyUnit u) {
  switch (u) {
    case EnergyUnit::Hartree:
      return "Ha";
    case EnergyUnit::Rydberg:
      return "Ry";
    case EnergyUnit::ElectronVolt:
      return "eV";
    case EnergyUnit::Kelvin:
      return "K";
  }
  return "?";
}

std::string to_string(VolumeUnit u) {
  return u == VolumeUnit::Bohr3 ? "bohr3" : "A3";
}

std::string to_string(PressureUnit u) {
  return u == PressureUnit::GPa ? "GPa" : "Ha/bohr3";
}

std::map<std::string, double> load_constants_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open constants file '" + path + "'");

  std::map<std::string, double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", lineno);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", lineno);
    try {
      std::size_t used = 0;
      const double v = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      out[key] = v;
    } catch (const std::exception&) {
      throw ParseError("malformed numeric value '" + val + "'", lineno);
    }
  }
  return out;
}

}  // namespace dimerstate::units
