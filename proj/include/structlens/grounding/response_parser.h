#pragma once

#include <string_view>

#include "structlens/grounding/types.h"

namespace structlens::grounding {

// Extracts geometry from grounding-model text. Accepts the tagged
// "<|box_start|>[x1, y1, x2, y2]<|box_end|>" form and bare bracketed or
// parenthesised number lists; the first list matching the expected kind wins
// (4 numbers = box, 2 = point). "Not found" yields NotFound. The result is
// clamped to the image. Throws MalformedResponse otherwise.
GroundingOutcome parse_grounding_text(std::string_view text, ExpectedKind kind, int width,
                                      int height);

}  // namespace structlens::grounding
