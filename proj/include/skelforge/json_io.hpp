#pragma once

#include <json.hpp>

#include "skelforge/scene.hpp"

namespace skelforge {

using Json = nlohmann::json;

Json point_to_json(Point p);
Point point_from_json(const Json& j);

// {joints:[{id,x,y,radius[,part]}], bones:[[a,b]]}; part only when set.
Json skeleton_to_json(const Skeleton& skel);
Skeleton skeleton_from_json(const Json& j);

Json transform_to_json(const Transform2& t);
Transform2 transform_from_json(const Json& j);

Json config_to_json(const SceneConfig& c);
// Overwrites only the keys present in `j`.
void apply_config_json(SceneConfig& c, const Json& j);

Json part_to_json(const Subpart& p);
Json edge_to_json(const HierarchyEdge& e);

Json scene_to_json(const Scene& s);
// Throws SchemaVersionMismatch or MalformedDocument.
Scene scene_from_json(const Json& j);

}  // namespace skelforge
