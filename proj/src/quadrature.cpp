#include "herding/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <map>
#include <memory>
#include <mutex>

#include "herding/errors.hpp"

namespace herding {

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 1) throw ParameterDomainError("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;

  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    auto rule = std::make_unique<GaussLegendreRule>();
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order));
    if (table == nullptr) throw std::runtime_error("failed to allocate Gauss-Legendre table");
    rule->nodes.resize(order);
    rule->weights.resize(order);
    for (int i = 0; i < order; ++i) {
      gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &rule->nodes[i], &rule->weights[i],
                                    table);
    }
    gsl_integration_glfixed_table_free(table);
    slot = std::move(rule);
  }
  return *slot;
}

}  // namespace herding
