#include "optcon/scenario.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "optcon/error.h"
#include "optcon/expression.h"
#include "optcon/random.h"

namespace optcon {

namespace {

using json = nlohmann::json;

// Seed stream tags, one per kind of draw.
constexpr std::uint64_t kTagUncertainty = 0x75;
constexpr std::uint64_t kTagInitial = 0x69;

// A JSON node plus its path, for error messages.
class Field {
 public:
  Field(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  // Malformed: wrong type, shape or name.
  [[noreturn]] void Fail(const std::string& msg) const {
    throw Error(ErrorKind::kParse, "field '" + path_ + "': " + msg);
  }
  // Well formed but outside the allowed values.
  [[noreturn]] void Invalid(const std::string& msg) const {
    throw Error(ErrorKind::kConfiguration, "field '" + path_ + "': " + msg);
  }

  const json& raw() const { return *j_; }
  const std::string& path() const { return path_; }
  bool is_object() const { return j_->is_object(); }
  bool is_array() const { return j_->is_array(); }
  bool is_string() const { return j_->is_string(); }
  bool is_number() const { return j_->is_number(); }

  bool Has(const char* key) const {
    return j_->is_object() && j_->contains(key);
  }
  Field operator[](const char* key) const {
    if (!j_->is_object()) Fail("expected an object");
    auto it = j_->find(key);
    if (it == j_->end()) {
      throw Error(ErrorKind::kParse,
                  "field '" + Join(key) + "': missing required field");
    }
    return Field(*it, Join(key));
  }
  std::optional<Field> Get(const char* key) const {
    if (!Has(key)) return std::nullopt;
    return (*this)[key];
  }
  std::size_t size() const {
    if (!j_->is_array()) Fail("expected an array");
    return j_->size();
  }
  Field At(std::size_t i) const {
    if (!j_->is_array()) Fail("expected an array");
    return Field((*j_)[i], path_ + "[" + std::to_string(i) + "]");
  }

  double Number() const {
    if (!j_->is_number()) Fail("expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) Fail("expected a finite number");
    return v;
  }
  long long Integer() const {
    if (!j_->is_number_integer() && !j_->is_number_unsigned()) {
      Fail("expected an integer");
    }
    return j_->get<long long>();
  }
  std::uint64_t Unsigned() const {
    if (j_->is_number_unsigned()) return j_->get<std::uint64_t>();
    const long long v = Integer();
    if (v < 0) Fail("expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  }
  bool Bool() const {
    if (!j_->is_boolean()) Fail("expected true or false");
    return j_->get<bool>();
  }
  std::string String() const {
    if (!j_->is_string()) Fail("expected a string");
    return j_->get<std::string>();
  }
  Eigen::VectorXd Vector() const {
    if (j_->is_number()) return Eigen::VectorXd::Constant(1, Number());
    Eigen::VectorXd v(size());
    for (std::size_t i = 0; i < size(); ++i) v(i) = At(i).Number();
    return v;
  }

  double NumberOr(const char* key, double fallback) const {
    auto f = Get(key);
    return f ? f->Number() : fallback;
  }
  bool BoolOr(const char* key, bool fallback) const {
    auto f = Get(key);
    return f ? f->Bool() : fallback;
  }

  // Rejects keys outside `allowed`; catches typos in hand-written files.
  void Allow(std::initializer_list<const char*> allowed) const {
    if (!j_->is_object()) Fail("expected an object");
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                  [&](const char* a) { return it.key() == a; });
      if (!ok) {
        throw Error(ErrorKind::kParse,
                    "field '" + Join(it.key()) + "': unknown field");
      }
    }
  }

 private:
  std::string Join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* j_;
  std::string path_;
};

json ParseJson(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Map the byte offset back to line and column.
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    int line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < pos; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << "JSON syntax error at line " << line << ", column " << col << ": "
        << e.what();
    throw Error(ErrorKind::kParse, msg.str());
  }
}

bool IsIndex(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

// "a.b.0.c=value": numeric segments index arrays, missing object keys are
// created. The value is read as JSON when it parses, else as a string.
void ApplyOverride(json& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorKind::kParse,
                "override '" + spec + "' is not of the form key=value");
  }
  const std::string path = spec.substr(0, eq);
  const std::string text = spec.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::stringstream ss(path);
  std::string seg;
  std::vector<std::string> segs;
  while (std::getline(ss, seg, '.')) segs.push_back(seg);
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const std::string& s = segs[k];
    if (s.empty()) {
      throw Error(ErrorKind::kParse, "override '" + spec + "': empty key");
    }
    const bool leaf = k + 1 == segs.size();
    if (node->is_array()) {
      if (!IsIndex(s) || std::stoul(s) >= node->size()) {
        throw Error(ErrorKind::kParse, "override '" + spec +
                                           "': bad array index '" + s + "'");
      }
      node = &(*node)[std::stoul(s)];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) {
        throw Error(ErrorKind::kParse, "override '" + spec +
                                           "': cannot descend into '" + s +
                                           "'");
      }
      node = &(*node)[s];
    }
    if (leaf) *node = value;
  }
}

json Prepare(std::string_view text, const ScenarioOptions& opts) {
  json doc = ParseJson(text);
  if (!doc.is_object()) {
    throw Error(ErrorKind::kParse, "scenario must be a JSON object");
  }
  // Flat form: "controller": "full" with its settings beside it.
  if (doc.contains("controller") && doc["controller"].is_string()) {
    json c{{"type", doc["controller"]}};
    for (const char* key : {"design", "pole", "k", "theta0", "b0",
                            "bound_terms", "tracking_gain"}) {
      if (doc.contains(key)) {
        c[key] = doc[key];
        doc.erase(key);
      }
    }
    doc["controller"] = c;
  }
  for (const auto& o : opts.overrides) ApplyOverride(doc, o);
  return doc;
}

Digraph ReadGraph(const Field& g) {
  g.Allow({"n", "edges"});
  const long long n = g["n"].Integer();
  if (n < 1) g["n"].Invalid("need at least one node");
  std::vector<Edge> edges;
  const Field list = g["edges"];
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Field e = list.At(k);
    if (e.size() != 3) e.Fail("edge must be [src, dst, weight]");
    const long long src = e.At(0).Integer();
    const long long dst = e.At(1).Integer();
    const double w = e.At(2).Number();
    if (src < 1 || src > n || dst < 1 || dst > n) {
      e.Invalid("node labels run from 1 to n");
    }
    if (src == dst) e.Invalid("self loops are not allowed");
    if (w < 0.0) e.Invalid("weight must be nonnegative");
    edges.push_back({static_cast<int>(src - 1), static_cast<int>(dst - 1), w});
  }
  try {
    return Digraph::FromEdges(static_cast<int>(n), edges);
  } catch (const Error& err) {
    g.Invalid(err.what());
  }
}

struct CostEntry {
  CostFunction cost;
  bool center_from_initial = false;
  double weight = 1.0;
  std::optional<HessianBounds> bounds;
};

CostEntry ReadCost(const Field& c) {
  c.Allow({"kind", "center", "weight", "hessian_bounds"});
  CostEntry out;
  const std::string kind = c["kind"].String();
  if (auto hb = c.Get("hessian_bounds")) {
    const Eigen::VectorXd b = hb->Vector();
    if (b.size() != 2 || !(b(0) > 0.0) || !(b(1) >= b(0))) {
      hb->Invalid("expected [lower, upper] with 0 < lower <= upper");
    }
    out.bounds = HessianBounds{b(0), b(1)};
  }
  if (kind == "quadratic") {
    out.weight = c.NumberOr("weight", 1.0);
    if (!(out.weight > 0.0)) c["weight"].Invalid("weight must be positive");
    double center = 0.0;
    if (auto f = c.Get("center")) {
      if (f->is_string()) {
        if (f->String() != "initial_output") {
          f->Fail("expected a number or \"initial_output\"");
        }
        out.center_from_initial = true;
      } else {
        center = f->Number();
      }
    }
    out.cost = CostFunction::Quadratic(center, out.weight);
  } else if (kind.rfind("example2_f", 0) == 0 && kind.size() == 11 &&
             kind[10] >= '1' && kind[10] <= '4') {
    if (c.Has("center") || c.Has("weight")) {
      c.Fail("center and weight only apply to quadratic costs");
    }
    out.cost = CostFunction::Example2(kind[10] - '0');
  } else {
    c["kind"].Fail("unknown cost kind '" + kind + "'");
  }
  if (out.bounds) out.cost = out.cost.WithDeclaredBounds(*out.bounds);
  return out;
}

struct PlantEntry {
  Plant plant;
  ManipulatorParams manipulator;
  bool is_manipulator = false;
  Eigen::VectorXd w;
};

PlantEntry ReadPlant(const Field& p, std::uint64_t run_seed, int agent) {
  p.Allow({"type", "params", "w"});
  PlantEntry out;
  const std::string type = p["type"].String();
  const auto params = p.Get("params");
  auto param = [&](const char* key, double fallback) {
    return params ? params->NumberOr(key, fallback) : fallback;
  };
  try {
    if (type == "manipulator") {
      if (params) params->Allow({"j1", "j2", "m0", "l0", "k", "grav"});
      ManipulatorParams mp;
      mp.j1 = param("j1", mp.j1);
      mp.j2 = param("j2", mp.j2);
      mp.m0 = param("m0", mp.m0);
      mp.l0 = param("l0", mp.l0);
      mp.k = param("k", mp.k);
      mp.grav = param("grav", mp.grav);
      out.plant = MakeManipulator(mp);
      out.manipulator = mp;
      out.is_manipulator = true;
    } else if (type == "fhn") {
      if (params) params->Allow({"a", "b", "c", "b0"});
      out.plant = MakeFitzHughNagumo(param("a", 0.2), param("b", 0.8),
                                     param("c", 0.8), param("b0", 1.0));
    } else if (type == "vdp") {
      if (params) params->Allow({"b0"});
      out.plant = MakeVanDerPol(param("b0", 1.0));
    } else if (type == "integrator") {
      if (params) params->Allow({"n"});
      const double n = param("n", 1.0);
      if (n < 1 || n != std::floor(n)) p["params"]["n"].Invalid("expected n >= 1");
      out.plant = MakeIntegratorChain(static_cast<int>(n));
    } else {
      p["type"].Fail("unknown plant type '" + type + "'");
    }
  } catch (const Error& e) {
    if (std::string(e.what()).rfind("field '", 0) == 0) throw;
    p.Invalid(e.what());
  }

  const int dim = out.plant.w_dim;
  out.w = Eigen::VectorXd::Zero(dim);
  if (auto w = p.Get("w")) {
    if (w->is_object()) {
      w->Allow({"sample"});
      const Field s = (*w)["sample"];
      s.Allow({"lower", "upper", "nonnegative", "seed"});
      UncertaintySpec spec;
      spec.lower = s["lower"].Vector();
      spec.upper = s["upper"].Vector();
      if (spec.lower.size() != dim || spec.upper.size() != dim) {
        s.Fail("bounds need " + std::to_string(dim) + " entries");
      }
      spec.nonnegative.assign(dim, false);
      if (auto nn = s.Get("nonnegative")) {
        if (nn->size() != static_cast<std::size_t>(dim)) {
          nn->Fail("need " + std::to_string(dim) + " flags");
        }
        for (int k = 0; k < dim; ++k) spec.nonnegative[k] = nn->At(k).Bool();
      }
      try {
        spec.Validate();
      } catch (const Error& e) {
        s.Invalid(e.what());
      }
      const std::uint64_t local = s.Has("seed") ? s["seed"].Unsigned() : 0;
      out.w = SampleUncertainty(
          spec, MixSeed({run_seed, static_cast<std::uint64_t>(agent),
                         kTagUncertainty, local}));
    } else {
      out.w = w->Vector();
      if (out.w.size() != dim) {
        w->Fail("expected " + std::to_string(dim) + " entries");
      }
    }
  }
  return out;
}

struct ControllerEntry {
  ControllerMode mode = ControllerMode::kFull;
  DesignFunctions design;
  ChainDesign chain;
  double theta0 = 0.0;
  double tracking_gain = 1.0;
};

DesignFunctions ReadDesign(const Field& d) {
  if (d.is_string()) {
    const std::string name = d.String();
    if (name == "example1") return MakeDesignExample1();
    if (name == "example2") return MakeDesignExample2();
    d.Fail("unknown design '" + name + "'");
  }
  d.Allow({"kappa", "rho"});
  try {
    return MakeDesignFromExpressions(Expression::Parse(d["kappa"].String()),
                                     Expression::Parse(d["rho"].String()));
  } catch (const Error& e) {
    if (std::string(e.what()).rfind("field '", 0) == 0) throw;
    if (e.kind() == ErrorKind::kParse) d.Fail(e.what());
    d.Invalid(e.what());
  }
}

ControllerEntry ReadController(const Field& c, const Plant& plant) {
  c.Allow({"type", "design", "pole", "k", "theta0", "b0", "bound_terms",
           "tracking_gain"});
  ControllerEntry out;
  const std::string type = c["type"].String();
  if (type == "full") {
    out.mode = ControllerMode::kFull;
  } else if (type == "reduced") {
    out.mode = ControllerMode::kReduced;
  } else if (type == "tracking") {
    out.mode = ControllerMode::kTracking;
  } else {
    c["type"].Fail("expected full, reduced or tracking");
  }
  out.tracking_gain = c.NumberOr("tracking_gain", 1.0);
  if (!(out.tracking_gain > 0.0)) {
    c["tracking_gain"].Invalid("must be positive");
  }
  out.theta0 = c.NumberOr("theta0", 0.0);
  if (out.theta0 < 0.0) c["theta0"].Invalid("must be nonnegative");

  if (auto k = c.Get("k")) {
    out.chain.k = k->Vector();
    if (out.chain.chain_length() != plant.n) {
      k->Fail("need " + std::to_string(plant.n - 1) + " coefficients");
    }
    if (!IsHurwitz(out.chain)) k->Invalid("polynomial is not Hurwitz");
  } else {
    const double pole = c.NumberOr("pole", 1.0);
    if (!(pole > 0.0)) c["pole"].Invalid("must be positive");
    out.chain = HurwitzCoefficients(plant.n, pole);
  }

  if (out.mode == ControllerMode::kTracking) {
    out.design = MakeDesignExample1();
    return out;
  }
  const Field design = c["design"];
  out.design = ReadDesign(design);
  if (out.mode == ControllerMode::kReduced) {
    if (!c.Has("b0") || !c.Has("bound_terms")) {
      c.Fail("reduced controller needs b0 and bound_terms");
    }
    const double b0 = c["b0"].Number();
    if (!(b0 > 0.0)) c["b0"].Invalid("must be positive");
    const Field bt = c["bound_terms"];
    bt.Allow({"gamma", "phi1", "phi3"});
    try {
      out.design = MakeReducedDesign(
          out.design, b0, Expression::Parse(bt["gamma"].String()),
          Expression::Parse(bt["phi1"].String()),
          Expression::Parse(bt["phi3"].String()));
    } catch (const Error& e) {
      if (std::string(e.what()).rfind("field '", 0) == 0) throw;
      bt.Invalid(e.what());
    }
  }
  try {
    ValidateDesign(out.design);
  } catch (const Error& e) {
    design.Invalid(e.what());
  }
  return out;
}

// Per-field boxes for randomized initial conditions.
struct InitialBoxes {
  double lo = -2.0, hi = 2.0;
  Eigen::Vector2d z, x, eta, r, v;
  bool physical = false;
};

Eigen::Vector2d ReadBox(const Field& b) {
  const Eigen::VectorXd v = b.Vector();
  if (v.size() != 2 || !(v(0) <= v(1))) b.Invalid("expected [lo, hi] with lo <= hi");
  return {v(0), v(1)};
}

}  // namespace

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::kIo, "cannot read '" + path.string() + "'");
  return ss.str();
}

Digraph ParseScenarioGraph(std::string_view text,
                           const ScenarioOptions& opts) {
  const json doc = Prepare(text, opts);
  return ReadGraph(Field(doc, "")["graph"]);
}

Scenario ParseScenario(std::string_view text, const ScenarioOptions& opts) {
  const json doc = Prepare(text, opts);
  const Field root(doc, "");
  root.Allow({"name", "description", "seed", "graph", "costs", "plants",
              "controller", "gains", "integrator", "initial", "metrics",
              "hessian_sampling"});

  Scenario sc;
  sc.name = root.Has("name") ? root["name"].String() : "scenario";
  sc.seed = opts.seed ? *opts.seed
                      : (root.Has("seed") ? root["seed"].Unsigned() : 0);
  sc.graph = ReadGraph(root["graph"]);
  const int n = sc.graph.size();

  const Field costs = root["costs"];
  const Field plants = root["plants"];
  if (costs.size() != static_cast<std::size_t>(n)) {
    costs.Fail("expected " + std::to_string(n) + " entries, one per node");
  }
  if (plants.size() != static_cast<std::size_t>(n)) {
    plants.Fail("expected " + std::to_string(n) + " entries, one per node");
  }

  if (auto hs = root.Get("hessian_sampling")) {
    hs->Allow({"lo", "hi", "n"});
    sc.hessian_sampling.lo = hs->NumberOr("lo", sc.hessian_sampling.lo);
    sc.hessian_sampling.hi = hs->NumberOr("hi", sc.hessian_sampling.hi);
    if (hs->Has("n")) {
      sc.hessian_sampling.n_samples = static_cast<int>((*hs)["n"].Integer());
    }
    if (!(sc.hessian_sampling.hi > sc.hessian_sampling.lo) ||
        sc.hessian_sampling.n_samples < 3) {
      hs->Invalid("need lo < hi and n >= 3");
    }
  }

  // Initial-condition boxes.
  InitialBoxes boxes;
  std::optional<Field> explicit_init;
  if (auto init = root.Get("initial")) {
    init->Allow({"random", "agents"});
    if (auto rnd = init->Get("random")) {
      rnd->Allow({"box", "z", "x", "eta", "r", "v", "physical"});
      if (auto b = rnd->Get("box")) {
        const Eigen::Vector2d box = ReadBox(*b);
        boxes.lo = box(0);
        boxes.hi = box(1);
      }
      boxes.physical = rnd->BoolOr("physical", false);
    }
    if (auto ag = init->Get("agents")) {
      if (ag->size() != static_cast<std::size_t>(n)) {
        ag->Fail("expected " + std::to_string(n) + " entries");
      }
      explicit_init = *ag;
    }
  }
  const Eigen::Vector2d def(boxes.lo, boxes.hi);
  boxes.z = boxes.x = boxes.eta = boxes.r = boxes.v = def;
  if (auto init = root.Get("initial")) {
    if (auto rnd = init->Get("random")) {
      if (auto b = rnd->Get("z")) boxes.z = ReadBox(*b);
      if (auto b = rnd->Get("x")) boxes.x = ReadBox(*b);
      if (auto b = rnd->Get("eta")) boxes.eta = ReadBox(*b);
      if (auto b = rnd->Get("r")) boxes.r = ReadBox(*b);
      if (auto b = rnd->Get("v")) boxes.v = ReadBox(*b);
    }
  }

  const Field ctrl = root["controller"];
  if (ctrl.is_array() && ctrl.size() != static_cast<std::size_t>(n)) {
    ctrl.Fail("expected one object or " + std::to_string(n) + " entries");
  }

  std::vector<bool> center_from_initial(n, false);
  sc.agents.resize(n);
  for (int i = 0; i < n; ++i) {
    AgentSpec& a = sc.agents[i];
    const PlantEntry pe = ReadPlant(plants.At(i), sc.seed, i);
    a.plant = pe.plant;
    a.w = pe.w;

    const Field cf = ctrl.is_array() ? ctrl.At(i) : ctrl;
    const ControllerEntry ce = ReadController(cf, a.plant);
    if (i == 0) {
      sc.mode = ce.mode;
      sc.tracking_gain = ce.tracking_gain;
    } else if (ce.mode != sc.mode) {
      cf["type"].Invalid("all agents must use the same controller type");
    }
    a.design = ce.design;
    a.chain = ce.chain;

    // Random draws first so explicit values do not shift the stream.
    Rng rng = Rng::Derive({sc.seed, static_cast<std::uint64_t>(i),
                           kTagInitial});
    auto draw = [&rng](const Eigen::Vector2d& b) {
      return rng.Uniform(b(0), b(1));
    };
    a.initial.z.resize(a.plant.m);
    for (int k = 0; k < a.plant.m; ++k) a.initial.z(k) = draw(boxes.z);
    a.initial.x.resize(a.plant.n);
    if (boxes.physical && pe.is_manipulator) {
      const double q1 = draw(boxes.x), dq1 = draw(boxes.x);
      const double q2 = draw(boxes.x), dq2 = draw(boxes.x);
      a.initial.x =
          ManipulatorChainState(pe.manipulator, a.w, q1, dq1, q2, dq2);
    } else {
      for (int k = 0; k < a.plant.n; ++k) a.initial.x(k) = draw(boxes.x);
    }
    a.initial_controller.eta = draw(boxes.eta);
    a.initial_controller.r = draw(boxes.r);
    a.initial_controller.v = draw(boxes.v);
    a.initial_controller.theta = ce.theta0;

    if (explicit_init) {
      const Field e = explicit_init->At(i);
      e.Allow({"z", "x", "eta", "theta", "r", "v"});
      if (auto f = e.Get("z")) {
        a.initial.z = f->Vector();
        if (a.initial.z.size() != a.plant.m) f->Fail("wrong dimension");
      }
      if (auto f = e.Get("x")) {
        a.initial.x = f->Vector();
        if (a.initial.x.size() != a.plant.n) f->Fail("wrong dimension");
      }
      if (auto f = e.Get("eta")) a.initial_controller.eta = f->Number();
      if (auto f = e.Get("theta")) {
        a.initial_controller.theta = f->Number();
        if (a.initial_controller.theta < 0.0) f->Invalid("must be nonnegative");
      }
      if (auto f = e.Get("r")) a.initial_controller.r = f->Number();
      if (auto f = e.Get("v")) a.initial_controller.v = f->Number();
    }

    const CostEntry c = ReadCost(costs.At(i));
    a.cost = c.cost;
    if (c.center_from_initial) {
      a.cost = CostFunction::Quadratic(a.initial.y(), c.weight);
      if (c.bounds) a.cost = a.cost.WithDeclaredBounds(*c.bounds);
    }
  }

  if (auto g = root.Get("gains")) {
    if (g->is_string()) {
      if (g->String() != "auto") g->Fail("expected \"auto\" or an object");
      sc.auto_gains = true;
    } else {
      g->Allow({"alpha", "beta"});
      sc.gains.alpha = (*g)["alpha"].Number();
      sc.gains.beta = (*g)["beta"].Number();
      if (!(sc.gains.alpha > 0.0) || !(sc.gains.beta > 0.0)) {
        g->Invalid("gains must be positive");
      }
    }
  } else {
    sc.auto_gains = true;
  }

  if (auto ig = root.Get("integrator")) {
    ig->Allow({"h", "T", "log_every", "refine", "refine_tol",
               "max_refine_depth", "divergence_limit"});
    auto& c = sc.integrator;
    c.h = ig->NumberOr("h", c.h);
    c.horizon = ig->NumberOr("T", c.horizon);
    if (ig->Has("log_every")) {
      c.log_every = static_cast<int>((*ig)["log_every"].Integer());
    }
    c.refine = ig->BoolOr("refine", c.refine);
    c.refinement.tol = ig->NumberOr("refine_tol", c.refinement.tol);
    if (ig->Has("max_refine_depth")) {
      c.refinement.max_depth =
          static_cast<int>((*ig)["max_refine_depth"].Integer());
    }
    c.divergence_limit = ig->NumberOr("divergence_limit", c.divergence_limit);
    if (!(c.refinement.tol > 0.0)) (*ig)["refine_tol"].Invalid("must be > 0");
    if (c.refinement.max_depth < 0 || c.refinement.max_depth > 40) {
      (*ig)["max_refine_depth"].Invalid("must lie in [0, 40]");
    }
  }

  if (auto m = root.Get("metrics")) {
    m->Allow({"tol_out", "state_norm_limit", "vo_tol"});
    sc.metrics.tol_out = m->NumberOr("tol_out", sc.metrics.tol_out);
    sc.metrics.state_norm_limit =
        m->NumberOr("state_norm_limit", sc.metrics.state_norm_limit);
    sc.metrics.vo_tol = m->NumberOr("vo_tol", sc.metrics.vo_tol);
  }

  try {
    sc.Validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfiguration, e.what());
  }
  return sc;
}

}  // namespace optcon
