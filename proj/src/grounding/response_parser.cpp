#include "structlens/grounding/response_parser.h"

#include <algorithm>
#include <cctype>
#include <regex>
#include <string>
#include <vector>

#include "structlens/core/errors.h"

namespace structlens::grounding {

namespace {

std::vector<double> numbers_in(const std::string& list) {
  static const std::regex num_re(R"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)");
  std::vector<double> out;
  for (auto it = std::sregex_iterator(list.begin(), list.end(), num_re); it != std::sregex_iterator();
       ++it) {
    out.push_back(std::stod(it->str()));
  }
  return out;
}

bool accepts(ExpectedKind kind, std::size_t count) {
  if (count == 4) return kind != ExpectedKind::point;
  if (count == 2) return kind != ExpectedKind::box;
  return false;
}

}  // namespace

GroundingOutcome parse_grounding_text(std::string_view text, ExpectedKind kind, int width,
                                      int height) {
  const std::string s(text);
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  // Tagged boxes first, then any bracketed or parenthesised list.
  // Tagged content may also be split into point pairs, "(x1,y1),(x2,y2)".
  static const std::regex tagged_re(R"(<\|box_start\|>([^<]*)<\|box_end\|>)");
  static const std::regex list_re(
      R"([\[\(]\s*[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?(?:\s*,\s*[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)+\s*[\]\)])");
  for (const auto* re : {&tagged_re, &list_re}) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), *re); it != std::sregex_iterator(); ++it) {
      const std::string list = it->size() > 1 && (*it)[1].matched ? (*it)[1].str() : it->str();
      const auto v = numbers_in(list);
      if (!accepts(kind, v.size())) continue;
      GroundingOutcome out;
      if (v.size() == 4) {
        out = BBox{v[0], v[1], v[2], v[3]};
      } else {
        out = Point{v[0], v[1]};
      }
      return clamp_outcome(out, width, height);
    }
  }
  if (lower.find("not found") != std::string::npos || lower.find("not_found") != std::string::npos) {
    return NotFound{};
  }
  throw MalformedResponse("no coordinates in grounding response", s);
}

}  // namespace structlens::grounding
