#include "twq/dsl/evaluate.hpp"

#include <map>

#include "twq/names.hpp"

namespace twq::dsl {

namespace {

template <typename T>
const T& as(const Collection& c, const QueryNode& n) {
  if (const auto* x = std::get_if<T>(&c)) return *x;
  throw Error(ErrorCode::KindMismatch, std::string(op_name(n.op)) + " is not defined on " +
                                           std::string(kind_name(kind_of(c))));
}

std::string bare_message(const Error& e) {
  std::string msg = e.what();
  const std::string prefix = std::string(error_code_name(e.code())) + ": ";
  if (msg.compare(0, prefix.size(), prefix) == 0) msg.erase(0, prefix.size());
  return msg;
}

TemporalDomain window_of(const Expr& e) {
  const Operand o = evaluate_operand(e, [](const Path& p) -> Operand {
    throw Error(ErrorCode::UnboundVariable, p.var);
  });
  if (const auto* d = std::get_if<TemporalDomain>(&o)) return *d;
  throw Error(ErrorCode::PredicateTypeError, "State needs a Date or DomT window");
}

class Evaluator {
 public:
  explicit Evaluator(const Warehouse& w) : w_(w) {}

  Collection script(const QueryScript& s) {
    for (const auto& [name, q] : s.bindings) bound_.insert_or_assign(fold_identifier(name), node(*q));
    return node(*s.result);
  }

 private:
  Collection node(const QueryNode& n) {
    std::vector<Collection> in;
    for (const auto& c : n.children) in.push_back(node(*c));
    try {
      return apply(n, in);
    } catch (const Error& e) {
      if (n.op == QueryOp::Ref) throw;
      throw Error(e.code(), std::string(op_name(n.op)) + " at line " + n.pos.to_string() + ": " + bare_message(e));
    }
  }

  Collection apply(const QueryNode& n, const std::vector<Collection>& in) {
    auto var = [&](std::size_t i) { return child_var(n, i); };
    switch (n.op) {
      case QueryOp::Ref: {
        auto it = bound_.find(fold_identifier(n.name));
        if (it != bound_.end()) return it->second;
        if (!w_.schema.find_class(n.name)) throw Error(ErrorCode::UnknownClass, n.name + " at line " + n.pos.to_string());
        ObjectSet out;
        for (const WarehouseObject* o : w_.extension(n.name)) {
          out.items.push_back(ObjectItem{o->oid, o->class_name, o->current, o});
        }
        return out;
      }
      case QueryOp::VUnion: return set_combine(SetOp::union_, Equality::value, in[0], in[1]);
      case QueryOp::VIntersect: return set_combine(SetOp::intersect, Equality::value, in[0], in[1]);
      case QueryOp::VDifference: return set_combine(SetOp::difference, Equality::value, in[0], in[1]);
      case QueryOp::IUnion: return set_combine(SetOp::union_, Equality::identity, in[0], in[1]);
      case QueryOp::IIntersect: return set_combine(SetOp::intersect, Equality::identity, in[0], in[1]);
      case QueryOp::IDifference: return set_combine(SetOp::difference, Equality::identity, in[0], in[1]);
      case QueryOp::Flatten: return flatten(in[0]);
      case QueryOp::DupElim: return dup_elim(in[0]);
      case QueryOp::EmptyElim: return empty_elim(in[0]);
      case QueryOp::Select: return select(in[0], var(0), *n.predicate);
      case QueryOp::Project: return project(in[0], var(0), n.items);
      case QueryOp::Join: return join(in[0], var(0), in[1], var(1), n.predicate.get());
      case QueryOp::Nest: return nest(in[0], n.name);
      case QueryOp::UnNest: return unnest(in[0], n.name);
      case QueryOp::Current: return current(as<ObjectSet>(in[0], n), w_.last_refresh);
      case QueryOp::Past: return past(as<ObjectSet>(in[0], n));
      case QueryOp::Archive: return archive(as<ObjectSet>(in[0], n));
      case QueryOp::State: return state_restrict(in[0], window_of(*n.window), n.relation, w_.last_refresh);
      case QueryOp::IJoin:
        return ijoin(as<StateSet>(in[0], n), var(0), as<StateSet>(in[1], n), var(1), n.predicate.get());
      case QueryOp::UJoin:
        return ujoin(as<StateSet>(in[0], n), var(0), as<StateSet>(in[1], n), var(1), n.predicate.get());
      case QueryOp::UGroup: return ugroup(as<StateSet>(in[0], n), n.unit);
      case QueryOp::DGroup: return dgroup(as<StateSet>(in[0], n), n.duration);
      case QueryOp::MakeSerie: return make_serie(as<StateSet>(in[0], n));
      case QueryOp::Agreg: return agreg(as<Series>(in[0], n), n.spec);
      case QueryOp::ACum: return acum(as<Series>(in[0], n), n.spec);
      case QueryOp::AMove: return amove(as<Series>(in[0], n), n.spec, n.duration);
      case QueryOp::ScaleUp: return scale_up(as<Series>(in[0], n), n.unit, n.spec);
      case QueryOp::ScaleDown: return scale_down(as<Series>(in[0], n), n.unit, n.spec);
    }
    throw Error(ErrorCode::KindMismatch, "unknown operator");
  }

  const Warehouse& w_;
  std::map<std::string, Collection> bound_;
};

}  // namespace

Collection evaluate(const QueryScript& script, const Warehouse& w) {
  return Evaluator(w).script(script);
}

}  // namespace twq::dsl
