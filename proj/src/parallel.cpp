#include "fgns/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

#include "fgns/errors.hpp"

namespace fgns {
namespace {
int g_thread_limit = 0;
int g_default_threads = 0;
}  // namespace

void set_thread_limit(int threads) {
  if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
  g_thread_limit = threads > 0 ? threads : 0;
  omp_set_num_threads(g_thread_limit > 0 ? g_thread_limit : g_default_threads);
}

int thread_limit() { return g_thread_limit; }

int apply_thread_env() {
  const char* env = std::getenv("FGNS_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) {
    throw ConfigError(std::string("FGNS_THREADS must be a positive integer, got '") + env + "'");
  }
  set_thread_limit(static_cast<int>(n));
  return static_cast<int>(n);
}

}  // namespace fgns
