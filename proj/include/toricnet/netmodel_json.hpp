#ifndef TORICNET_NETMODEL_JSON_HPP
#define TORICNET_NETMODEL_JSON_HPP

#include <json.hpp>

#include "toricnet/netmodel.hpp"

namespace toricnet {

// Canonical JSON form: species[], vertices[{label, exponents[]}],
// edges[{src, dst, index}].
nlohmann::json egraph_to_json(const EGraph& g);
EGraph egraph_from_json(const nlohmann::json& j);

}  // namespace toricnet

#endif
