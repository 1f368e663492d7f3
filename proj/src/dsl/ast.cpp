#include "twq/dsl/ast.hpp"

#include "twq/names.hpp"

namespace twq::dsl {

namespace {

struct OpName {
  QueryOp op;
  std::string_view name;
};

constexpr OpName kOps[] = {
    {QueryOp::VUnion, "VUnion"},       {QueryOp::VIntersect, "VIntersect"}, {QueryOp::VDifference, "VDifference"},
    {QueryOp::IUnion, "IUnion"},       {QueryOp::IIntersect, "IIntersect"}, {QueryOp::IDifference, "IDifference"},
    {QueryOp::Flatten, "Flatten"},     {QueryOp::DupElim, "DupElim"},       {QueryOp::EmptyElim, "EmptyElim"},
    {QueryOp::Select, "Select"},       {QueryOp::Project, "Project"},       {QueryOp::Join, "Join"},
    {QueryOp::Nest, "Nest"},           {QueryOp::UnNest, "UnNest"},         {QueryOp::Current, "Current"},
    {QueryOp::Past, "Past"},           {QueryOp::Archive, "Archive"},       {QueryOp::State, "State"},
    {QueryOp::IJoin, "IJoin"},         {QueryOp::UJoin, "UJoin"},           {QueryOp::UGroup, "UGroup"},
    {QueryOp::DGroup, "DGroup"},       {QueryOp::MakeSerie, "MakeSerie"},   {QueryOp::Agreg, "Agreg"},
    {QueryOp::ACum, "ACum"},           {QueryOp::AMove, "AMove"},           {QueryOp::ScaleUp, "ScaleUp"},
    {QueryOp::ScaleDown, "ScaleDown"},
};

}  // namespace

std::string_view op_name(QueryOp op) {
  if (op == QueryOp::Ref) return "Ref";
  for (const auto& o : kOps) {
    if (o.op == op) return o.name;
  }
  return "?";
}

std::optional<QueryOp> parse_op_name(std::string_view name) {
  const std::string folded = fold_identifier(name);
  for (const auto& o : kOps) {
    if (fold_identifier(o.name) == folded) return o.op;
  }
  return std::nullopt;
}

bool same_query(const QueryPtr& a, const QueryPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->op != b->op || a->name != b->name || a->vars != b->vars || a->children.size() != b->children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a->children.size(); ++i) {
    if (!same_query(a->children[i], b->children[i])) return false;
  }
  return same_expr(a->predicate, b->predicate) && a->items == b->items && same_expr(a->window, b->window) &&
         a->relation == b->relation && a->unit == b->unit && a->duration == b->duration && a->spec == b->spec;
}

bool same_script(const QueryScript& a, const QueryScript& b) {
  if (a.bindings.size() != b.bindings.size()) return false;
  for (std::size_t i = 0; i < a.bindings.size(); ++i) {
    if (a.bindings[i].first != b.bindings[i].first || !same_query(a.bindings[i].second, b.bindings[i].second)) {
      return false;
    }
  }
  return same_query(a.result, b.result);
}

std::string child_var(const QueryNode& n, std::size_t i) {
  if (i < n.vars.size() && !n.vars[i].empty()) return n.vars[i];
  if (i < n.children.size() && n.children[i]->op == QueryOp::Ref) return n.children[i]->name;
  return {};
}

}  // namespace twq::dsl
