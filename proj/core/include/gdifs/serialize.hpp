#pragma once

#include <memory>
#include <string>

#include "json.hpp"

#include "gdifs/dimension.hpp"
#include "gdifs/gifs.hpp"
#include "gdifs/reduce.hpp"
#include "gdifs/render.hpp"

namespace gdifs {

// All artifacts use ordered JSON so emitted bytes are stable run to run.
using json = nlohmann::ordered_json;

json to_json(const FieldDescriptor& desc);
FieldDescriptor field_descriptor_from_json(const json& j);

json to_json(const FieldElement& e); // array of rational strings
FieldElement field_element_from_json(const json& j,
                                     const std::shared_ptr<const Field>& field);

json to_json(const Similitude& s);
Similitude similitude_from_json(const json& j,
                                const std::shared_ptr<const Field>& field);

json to_json(const IfsSpec& ifs);
IfsSpec ifs_from_json(const json& j);

// Graph serialization embeds the field descriptor of its vertices.
json to_json(const LabeledDigraph& graph);
LabeledDigraph graph_from_json(const json& j);
LabeledDigraph graph_from_json(const json& j,
                               const std::shared_ptr<const Field>& field);

json to_json(const GifsSystem& system);
GifsSystem gifs_from_json(const json& j);

json to_json(const ReductionReport& report);

json to_json(const IncidenceMatrix& m); // rational strings
IncidenceMatrix incidence_from_json(const json& j);

json to_json(const Polynomial& p); // rational strings, constant first

json to_json(const PointCloud& cloud);
std::string cloud_to_csv(const PointCloud& cloud); // "re,im,type" lines

// File helpers (IoError on failure).
json load_json(const std::string& path);
void save_text(const std::string& path, const std::string& content);

} // namespace gdifs
