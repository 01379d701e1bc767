#include "structlens/workflow/registry.h"

#include <algorithm>
#include <cctype>

#include "structlens/core/errors.h"
#include "structlens/geomtools/constructions.h"
#include "structlens/geomtools/expression.h"
#include "structlens/grounding/prompt.h"

namespace structlens::workflow {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

const ArgValue& required(const ToolCall& call, std::string_view key) {
  const ArgValue* v = call.find(key);
  if (!v) throw InvalidArgument(call.tool_name + " needs argument " + std::string(key));
  return *v;
}

std::string required_text(const ToolCall& call, std::string_view key) {
  std::string s = required(call, key).as_string();
  if (s.empty()) throw InvalidArgument("argument " + std::string(key) + " is empty");
  return s;
}

double required_number(const ToolCall& call, std::string_view key) {
  const auto n = required(call, key).as_number();
  if (!n) throw InvalidArgument("argument " + std::string(key) + " must be a number");
  return *n;
}

std::optional<double> optional_number(const ToolCall& call, std::string_view key) {
  const ArgValue* v = call.find(key);
  if (!v) return std::nullopt;
  const auto n = v->as_number();
  if (!n) throw InvalidArgument("argument " + std::string(key) + " must be a number");
  return n;
}

std::optional<GridPos> optional_panel(const ToolCall& call) {
  for (const char* key : {"subplot", "target_desc", "panel"}) {
    if (const ArgValue* v = call.find(key)) {
      if (auto p = grounding::parse_element_prompt(v->as_string()).panel) return p;
    }
  }
  return std::nullopt;
}

// "0, 10, 20" or "[0, 10, 20]" or a single number.
std::vector<double> number_list(const ArgValue& v) {
  if (auto n = v.as_number()) return {*n};
  std::string s = v.as_string();
  std::replace(s.begin(), s.end(), '[', ' ');
  std::replace(s.begin(), s.end(), ']', ' ');
  std::vector<double> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      const auto n = ArgValue::bare(s.substr(start, i - start)).as_number();
      if (!n) throw InvalidArgument("expected a comma-separated list of numbers");
      out.push_back(*n);
      start = i + 1;
    }
  }
  return out;
}

struct Input {
  std::string id;
  const RasterImage* image;
};

Input input_image(const ToolCall& call, const ToolEnv& env) {
  const ArgValue* v = call.find("image");
  if (!v) {
    for (const auto& [key, value] : call.args) {
      if (value.kind == ArgValue::Kind::image_id) {
        v = &value;
        break;
      }
    }
  }
  if (!v) throw InvalidArgument(call.tool_name + " needs an image argument");
  const auto& entry = env.memory.get(v->as_string());
  return {entry.image_id, &entry.image};
}

ToolResult image_result(const Input& in, tools::ToolOutput out) {
  return {in.id, std::move(out), {}};
}

ToolParam image_param() { return {"image", "image_id", true}; }

}  // namespace

nlohmann::ordered_json signature_json(const ToolSpec& spec) {
  nlohmann::ordered_json params = nlohmann::ordered_json::array();
  for (const auto& p : spec.params) {
    params.push_back({{"name", p.name}, {"type", p.type}, {"required", p.required}});
  }
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["function"] = spec.function;
  j["params"] = std::move(params);
  j["description"] = spec.description;
  return j;
}

void ToolRegistry::add(ToolSpec spec) {
  if (find(spec.name) || find(spec.function)) {
    throw InvalidArgument("tool " + spec.name + " is already registered");
  }
  specs_.push_back(std::move(spec));
}

const ToolSpec* ToolRegistry::find(std::string_view name) const {
  for (const auto& s : specs_) {
    if (iequals(s.name, name) || iequals(s.function, name)) return &s;
  }
  return nullptr;
}

ToolRegistry ToolRegistry::subset(const std::vector<std::string>& names) const {
  ToolRegistry out;
  for (const auto& n : names) {
    const ToolSpec* s = find(n);
    if (s && !out.find(s->name)) out.specs_.push_back(*s);
  }
  return out;
}

std::vector<std::string> ToolRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& s : specs_) out.push_back(s.name);
  return out;
}

std::string ToolRegistry::describe() const {
  std::string out;
  for (const auto& s : specs_) out += signature_json(s).dump() + "\n";
  return out;
}

ToolRegistry default_registry() {
  ToolRegistry r;
  r.add({"Subfigure_Cropping", "crop_subfigure",
         "Crops one subplot of a multi-chart image, together with its legend when the legend "
         "sits outside the subplot. target_desc names the subplot, e.g. \"subplot at row 1, "
         "column 2\".",
         {image_param(), {"target_desc", "string", true}},
         [](const ToolCall& call, const ToolEnv& env) {
           const Input in = input_image(call, env);
           grounding::Grounder g(env.grounding, in.id);
           return image_result(in, tools::crop_subfigure(*in.image, required_text(call, "target_desc"), g));
         }});
  r.add({"Region_Magnification", "magnify_region",
         "Zooms into the region between two tick values on the x and/or y axis, keeping the "
         "axis ruler. Window ends must be tick values.",
         {image_param(), {"x_start", "number", false}, {"x_end", "number", false},
          {"y_start", "number", false}, {"y_end", "number", false}, {"scale", "number", false},
          {"subplot", "string", false}},
         [](const ToolCall& call, const ToolEnv& env) {
           const Input in = input_image(call, env);
           tools::MagnifyRequest req;
           const auto xs = optional_number(call, "x_start");
           const auto xe = optional_number(call, "x_end");
           const auto ys = optional_number(call, "y_start");
           const auto ye = optional_number(call, "y_end");
           if (xs.has_value() != xe.has_value() || ys.has_value() != ye.has_value()) {
             throw InvalidArgument("a window needs both its start and end");
           }
           if (xs) req.x = tools::AxisWindow{*xs, *xe};
           if (ys) req.y = tools::AxisWindow{*ys, *ye};
           req.scale = optional_number(call, "scale").value_or(env.settings.magnify_scale);
           req.panel = optional_panel(call);
           grounding::Grounder g(env.grounding, in.id);
           return image_result(in, tools::magnify_region(*in.image, req, g));
         }});
  r.add({"Auxiliary_Line", "add_auxiliary_line",
         "Draws a dashed reference line across the image at a value of the x or y axis. "
         "Give ref_ticks (tick values around the value) when the value is not itself a tick.",
         {image_param(), {"axis", "enum{x,y}", true}, {"value", "number", true},
          {"ref_ticks", "string", false}, {"subplot", "string", false}},
         [](const ToolCall& call, const ToolEnv& env) {
           const Input in = input_image(call, env);
           tools::AuxiliaryLineRequest req;
           const std::string axis = required_text(call, "axis");
           if (axis != "x" && axis != "y") throw InvalidArgument("axis must be x or y");
           req.axis = axis[0];
           req.value = required_number(call, "value");
           if (const ArgValue* t = call.find("ref_ticks")) req.ref_ticks = number_list(*t);
           req.panel = optional_panel(call);
           req.style = env.settings.line_style;
           grounding::Grounder g(env.grounding, in.id);
           return image_result(in, tools::add_auxiliary_line(*in.image, req, g));
         }});
  r.add({"Legend_Masking", "mask_by_legend",
         "Keeps only, or removes, the data series of one legend entry by matching the colour "
         "of its legend icon.",
         {image_param(), {"legend_item", "string", true}, {"mode", "enum{keep_only,remove}", false}},
         [](const ToolCall& call, const ToolEnv& env) {
           const Input in = input_image(call, env);
           const ArgValue* mode = call.find("mode");
           const auto m = mode ? tools::mask_mode_from_string(mode->as_string())
                               : tools::MaskMode::keep_only;
           grounding::Grounder g(env.grounding, in.id);
           return image_result(in, tools::mask_by_legend(*in.image, required_text(call, "legend_item"),
                                                         m, g, env.settings.tau));
         }});
  r.add({"Point_Connection", "connect_points",
         "Draws a dashed segment between two labelled points of a geometry diagram.",
         {image_param(), {"a", "string", true}, {"b", "string", true}},
         [](const ToolCall& call, const ToolEnv& env) {
           const Input in = input_image(call, env);
           grounding::Grounder g(env.grounding, in.id);
           return image_result(in, geom::connect_points(*in.image, required_text(call, "a"),
                                                        required_text(call, "b"), g,
                                                        env.settings.line_style));
         }});
  r.add({"Perpendicular_Construction", "construct_perpendicular",
         "Draws the perpendicular from a labelled point to the line through points a and b and "
         "labels its foot.",
         {image_param(), {"point", "string", true}, {"a", "string", true}, {"b", "string", true}},
         [](const ToolCall& call, const ToolEnv& env) {
           const Input in = input_image(call, env);
           grounding::Grounder g(env.grounding, in.id);
           auto res = geom::construct_perpendicular(
               *in.image, required_text(call, "point"),
               {required_text(call, "a"), required_text(call, "b")}, g, env.settings.line_style);
           return image_result(in, std::move(res.output));
         }});
  r.add({"Parallel_Construction", "construct_parallel",
         "Draws the line through a labelled point parallel to the line through points a and b.",
         {image_param(), {"point", "string", true}, {"a", "string", true}, {"b", "string", true}},
         [](const ToolCall& call, const ToolEnv& env) {
           const Input in = input_image(call, env);
           grounding::Grounder g(env.grounding, in.id);
           auto res = geom::construct_parallel(
               *in.image, required_text(call, "point"),
               {required_text(call, "a"), required_text(call, "b")}, g, env.settings.line_style);
           return image_result(in, std::move(res.output));
         }});
  r.add({"Numeric_Computation", "compute",
         "Evaluates an arithmetic expression with + - * / ^, parentheses, sqrt, sin, cos, tan, "
         "atan2, abs, radians, degrees and pi.",
         {{"expression", "string", true}},
         [](const ToolCall& call, const ToolEnv&) {
           const double v = geom::eval_expression(required_text(call, "expression"));
           return ToolResult{{}, std::nullopt, format_number(v)};
         }});
  return r;
}

}  // namespace structlens::workflow
