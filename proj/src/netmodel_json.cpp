#include "toricnet/netmodel_json.hpp"

#include "toricnet/errors.hpp"

namespace toricnet {

nlohmann::json egraph_to_json(const EGraph& g) {
    nlohmann::json j;
    j["species"] = nlohmann::json::array();
    for (const Species& sp : g.species()) j["species"].push_back(sp.name);
    j["vertices"] = nlohmann::json::array();
    for (const Vertex& v : g.vertices()) {
        nlohmann::json jv;
        jv["label"] = v.label;
        jv["exponents"] = std::vector<double>(v.exponents.data(),
                                              v.exponents.data() + v.exponents.size());
        j["vertices"].push_back(jv);
    }
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : g.edges())
        j["edges"].push_back({{"src", e.source}, {"dst", e.target}, {"index", e.index}});
    return j;
}

EGraph egraph_from_json(const nlohmann::json& j) {
    try {
        std::vector<Species> species;
        for (const auto& name : j.at("species"))
            species.push_back({name.get<std::string>(), static_cast<int>(species.size())});
        std::vector<Vertex> vertices;
        for (const auto& jv : j.at("vertices")) {
            const auto expo = jv.at("exponents").get<std::vector<double>>();
            Vertex v;
            v.exponents = Eigen::Map<const Eigen::VectorXd>(expo.data(),
                                                            static_cast<Eigen::Index>(expo.size()));
            v.label = jv.at("label").get<std::string>();
            vertices.push_back(std::move(v));
        }
        std::vector<Edge> edges;
        for (const auto& je : j.at("edges"))
            edges.push_back({je.at("src").get<int>(), je.at("dst").get<int>(),
                             je.at("index").get<int>()});
        return EGraph(std::move(species), std::move(vertices), std::move(edges));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid network JSON: ") + e.what());
    }
}

}  // namespace toricnet
