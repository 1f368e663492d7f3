#include "twq/mapping.hpp"

namespace twq {

namespace {

MappingPtr wrap(std::string alias, decltype(MappingExpr::node) node) {
  return std::make_shared<MappingExpr>(MappingExpr{std::move(alias), std::move(node)});
}

}  // namespace

MappingPtr mapping_source(std::string alias, std::string class_name) {
  return wrap(std::move(alias), MappingExpr::Source{std::move(class_name)});
}

MappingPtr mapping_select(std::string alias, MappingPtr input, ExprPtr predicate) {
  return wrap(std::move(alias), MappingExpr::Select{std::move(input), std::move(predicate)});
}

MappingPtr mapping_join(std::string alias, MappingPtr left, MappingPtr right, ExprPtr predicate) {
  return wrap(std::move(alias), MappingExpr::Join{std::move(left), std::move(right), std::move(predicate)});
}

MappingPtr mapping_project(std::string alias, MappingPtr input, std::vector<Projection> items) {
  return wrap(std::move(alias), MappingExpr::Project{std::move(input), std::move(items)});
}

MappingPtr mapping_combine(std::string alias, MappingSetOp op, MappingPtr left, MappingPtr right) {
  return wrap(std::move(alias), MappingExpr::Combine{op, std::move(left), std::move(right)});
}

std::string_view mapping_set_op_name(MappingSetOp op) {
  switch (op) {
    case MappingSetOp::union_: return "UNION";
    case MappingSetOp::intersect: return "INTERSECT";
    case MappingSetOp::difference: return "DIFFERENCE";
  }
  return "?";
}

bool same_mapping(const MappingPtr& a, const MappingPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->alias != b->alias || a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, MappingExpr::Source>) {
          return x.class_name == y.class_name;
        } else if constexpr (std::is_same_v<T, MappingExpr::Select>) {
          return same_mapping(x.input, y.input) && same_expr(x.predicate, y.predicate);
        } else if constexpr (std::is_same_v<T, MappingExpr::Join>) {
          return same_mapping(x.left, y.left) && same_mapping(x.right, y.right) &&
                 same_expr(x.predicate, y.predicate);
        } else if constexpr (std::is_same_v<T, MappingExpr::Project>) {
          return same_mapping(x.input, y.input) && x.items == y.items;
        } else {
          return x.op == y.op && same_mapping(x.left, y.left) && same_mapping(x.right, y.right);
        }
      },
      a->node);
}

}  // namespace twq
