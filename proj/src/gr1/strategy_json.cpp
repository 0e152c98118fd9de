#include <json.hpp>

#include "gr1kit/gr1.hpp"

namespace gr1kit::gr1 {

using Json = nlohmann::ordered_json;
using speclang::Owner;
using speclang::VarDecl;

namespace {

Json values(const std::vector<VarDecl>& vars, const speclang::Valuation& v, std::size_t first) {
  Json obj = Json::object();
  for (std::size_t i = 0; i < v.size(); ++i) obj[vars[first + i].name] = v[i];
  return obj;
}

std::vector<int> read_values(const Json& obj, const std::vector<VarDecl>& vars, std::size_t first, std::size_t count) {
  if (!obj.is_object() || obj.size() != count) throw std::runtime_error("strategy: assignment has wrong variable set");
  std::vector<int> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const VarDecl& d = vars[first + i];
    auto it = obj.find(d.name);
    if (it == obj.end() || !it->is_number_integer()) throw std::runtime_error("strategy: missing value for " + d.name);
    const auto v = it->get<std::int64_t>();
    if (!d.domain.contains(v)) throw std::runtime_error("strategy: value out of domain for " + d.name);
    out[i] = static_cast<int>(v);
  }
  return out;
}

}  // namespace

std::string strategy_to_json(const Strategy& st) {
  const auto& space = st.space;
  const auto& vars = space.vars();
  const std::size_t ne = static_cast<std::size_t>(space.env_var_count());
  Json doc = Json::object();
  Json jvars = Json::array();
  for (const auto& v : vars) {
    Json jv = Json::object();
    jv["name"] = v.name;
    jv["owner"] = v.owner == Owner::env ? "env" : "sys";
    jv["type"] = v.domain.boolean ? "bool" : "int";
    jv["lo"] = v.domain.lo;
    jv["hi"] = v.domain.hi;
    jvars.push_back(std::move(jv));
  }
  doc["vars"] = std::move(jvars);
  doc["goals"] = st.goals;
  Json nodes = Json::array();
  for (std::size_t id = 0; id < st.nodes.size(); ++id) {
    const auto& n = st.nodes[id];
    Json jn = Json::object();
    jn["id"] = id;
    jn["state"] = values(vars, space.decode(n.state), 0);
    jn["goal"] = n.goal;
    Json edges = Json::array();
    for (const auto& e : n.edges) {
      Json je = Json::object();
      je["env"] = values(vars, space.decode_env(e.env), 0);
      je["sys"] = values(vars, space.decode_sys(e.sys), ne);
      je["next"] = e.next;
      edges.push_back(std::move(je));
    }
    jn["edges"] = std::move(edges);
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  Json init = Json::array();
  for (const auto& i : st.init) {
    Json ji = Json::object();
    ji["env"] = values(vars, space.decode_env(i.env), 0);
    ji["node"] = i.node;
    init.push_back(std::move(ji));
  }
  doc["init"] = std::move(init);
  return doc.dump();
}

Strategy strategy_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("strategy: ") + ex.what());
  }
  try {
    std::vector<VarDecl> vars;
    for (const auto& jv : doc.at("vars")) {
      VarDecl d;
      d.name = jv.at("name").get<std::string>();
      const auto owner = jv.at("owner").get<std::string>();
      if (owner != "env" && owner != "sys") throw std::runtime_error("strategy: bad owner " + owner);
      d.owner = owner == "env" ? Owner::env : Owner::sys;
      const auto type = jv.at("type").get<std::string>();
      if (type == "bool") d.domain = speclang::Domain::boolean_domain();
      else if (type == "int") d.domain = speclang::Domain::int_range(jv.at("lo").get<int>(), jv.at("hi").get<int>());
      else throw std::runtime_error("strategy: bad type " + type);
      if (d.domain.lo > d.domain.hi) throw std::runtime_error("strategy: empty domain for " + d.name);
      vars.push_back(std::move(d));
    }
    Strategy st;
    st.space = arena::VarSpace(vars);
    const auto& space = st.space;
    const std::size_t nv = vars.size();
    const std::size_t ne = static_cast<std::size_t>(space.env_var_count());
    st.goals = doc.at("goals").get<int>();
    if (st.goals < 1) throw std::runtime_error("strategy: goals must be positive");
    const auto& jnodes = doc.at("nodes");
    const std::size_t count = jnodes.size();
    auto node_ref = [&](const Json& j) {
      const auto id = j.get<std::uint64_t>();
      if (id >= count) throw std::runtime_error("strategy: dangling node reference");
      return static_cast<std::uint32_t>(id);
    };
    for (std::size_t id = 0; id < count; ++id) {
      const auto& jn = jnodes[id];
      if (jn.at("id").get<std::uint64_t>() != id) throw std::runtime_error("strategy: node ids must be consecutive");
      StrategyNode n;
      n.state = space.encode(read_values(jn.at("state"), vars, 0, nv));
      n.goal = jn.at("goal").get<int>();
      if (n.goal < 0 || n.goal >= st.goals) throw std::runtime_error("strategy: goal index out of range");
      for (const auto& je : jn.at("edges")) {
        StrategyEdge e;
        const auto env = read_values(je.at("env"), vars, 0, ne);
        const auto sys = read_values(je.at("sys"), vars, ne, nv - ne);
        std::vector<int> full(env);
        full.insert(full.end(), sys.begin(), sys.end());
        const StateIndex t = space.encode(full);
        e.env = space.env_part(t);
        e.sys = space.sys_part(t);
        e.next = node_ref(je.at("next"));
        n.edges.push_back(e);
      }
      std::sort(n.edges.begin(), n.edges.end(), [](const StrategyEdge& a, const StrategyEdge& b) { return a.env < b.env; });
      st.nodes.push_back(std::move(n));
    }
    for (const auto& ji : doc.at("init")) {
      std::vector<int> full = read_values(ji.at("env"), vars, 0, ne);
      for (std::size_t i = ne; i < nv; ++i) full.push_back(vars[i].domain.lo);
      st.init.push_back({space.env_part(space.encode(full)), node_ref(ji.at("node"))});
    }
    std::sort(st.init.begin(), st.init.end(), [](const StrategyInit& a, const StrategyInit& b) { return a.env < b.env; });
    return st;
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("strategy: ") + ex.what());
  }
}

}  // namespace gr1kit::gr1
