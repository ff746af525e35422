// Loaded with `netglm --plugin <path to this module>`. Adds the undirected
// term treatment_spillover: sum over ties i-j with overlapping neighborhoods
// of x_i y_j + x_j y_i.

#include "netglm/registry.hpp"
#include "netglm/term_context.hpp"

namespace {

double partner_sum(const netglm::TermContext& ctx, int i, bool of_y) {
  double s = 0.0;
  for (int j : ctx.out_neighbors(i))
    if (ctx.overlap(i, j)) s += of_y ? ctx.y(j) : ctx.x(j);
  return s;
}

}  // namespace

extern "C" void netglm_register_terms(netglm::TermRegistry& registry) {
  netglm::UserTermDescriptor d;
  d.name = "treatment_spillover";
  d.supports_directed = false;
  d.change_x = [](const netglm::TermContext& ctx, int i) { return partner_sum(ctx, i, true); };
  d.change_y = [](const netglm::TermContext& ctx, int i) { return partner_sum(ctx, i, false); };
  d.change_z = [](const netglm::TermContext& ctx, int i, int j) {
    if (!ctx.overlap(i, j)) return 0.0;
    return ctx.x(i) * ctx.y(j) + ctx.x(j) * ctx.y(i);
  };
  registry.register_user_term(std::move(d));
}
