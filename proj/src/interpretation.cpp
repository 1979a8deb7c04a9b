#include "acsolve/interpretation.hpp"

#include <sstream>

#include "acsolve/parser.hpp"

namespace acsolve {

NamedInterpretation parseInterpretation(const std::string& text) {
  NamedInterpretation out;
  std::istringstream in(text);
  std::string line;
  enum class Section { There, Here } section = Section::There;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string body = line.substr(first, last - first + 1);
    if (body[0] == '%') continue;
    if (body == "#here") {
      section = Section::Here;
      out.hereSection = true;
      continue;
    }
    if (body == "#there") {
      section = Section::There;
      continue;
    }
    if (body.back() != '.') body += '.';
    auto atoms = parseFacts(body);
    for (auto& a : atoms)
      (section == Section::Here ? out.here : out.there).push_back(std::move(a));
  }
  if (!out.hereSection) out.here = out.there;
  return out;
}

std::string printInterpretation(const std::vector<Atom>& here,
                                const std::vector<Atom>& there) {
  std::ostringstream out;
  out << "#here\n";
  for (const auto& a : here) out << a.str() << '\n';
  out << "#there\n";
  for (const auto& a : there) out << a.str() << '\n';
  return out.str();
}

}  // namespace acsolve
