#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "structlens/core/annotation.h"

namespace structlens::grounding {

enum class TextRole { title, x_label, y_label };

// Structured form of an element prompt. `category` is empty for phrasing the
// grammar does not know; such references never resolve.
struct ElementRef {
  std::optional<ElementCategory> category;
  std::optional<GridPos> panel;
  std::optional<std::string> label;  // legend entry name or point label
  std::optional<char> axis;          // 'x' or 'y' for ticks
  std::optional<double> value;       // tick value
  std::optional<TextRole> text_role;
  std::string text;                  // the prompt as given
};

// Total, best-effort parse. Understands, case-insensitively:
//   "the subplot at row 2, column 1"         "the subplot"
//   "the legend [of <panel>]"                 "the legend entry \"Group A\" [of <panel>]"
//   "the title | x-axis label | y-axis label [of <panel>]"
//   "tick 25 on the x axis [of <panel>]"      "point B"
ElementRef parse_element_prompt(std::string_view prompt);

// Fixed evaluation prompt for an annotation, built from its id and fields.
std::string canonical_prompt(const ElementAnnotation& a);

// "the subplot at row R, column C"
std::string subplot_prompt(GridPos pos);

}  // namespace structlens::grounding
