#include "dexp3m/dexp3m.h"

#include <cstring>
#include <string>

#include "experiment.hpp"

namespace {

thread_local std::string g_last_error;

dxm_status fail(dxm_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
dxm_status guarded(Fn&& fn) {
  try {
    fn();
    return DXM_OK;
  } catch (const dexp3m::ConfigError& e) {
    return fail(DXM_ERR_CONFIG, e.what());
  } catch (const dexp3m::IoError& e) {
    return fail(DXM_ERR_IO, e.what());
  } catch (const dexp3m::InvariantError& e) {
    return fail(DXM_ERR_INVARIANT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(DXM_ERR_ARG, e.what());
  } catch (const std::exception& e) {
    return fail(DXM_ERR_INVARIANT, e.what());
  }
}

}  // namespace

struct dxm_config {
  dexp3m::ExperimentConfig cfg;
};

struct dxm_policy {
  dexp3m::PolicyParams params;
  dexp3m::PolicyState state;
  std::mt19937_64 rng;
};

extern "C" {

const char* dxm_last_error(void) { return g_last_error.c_str(); }

const char* dxm_version(void) { return "1.0.0"; }

dxm_status dxm_config_load(const char* path, dxm_config** out) {
  if (!path || !out) return fail(DXM_ERR_ARG, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new dxm_config{dexp3m::load_config(path)}; });
}

void dxm_config_free(dxm_config* cfg) { delete cfg; }

dxm_status dxm_validate(const dxm_config* cfg, char* buf, size_t cap) {
  if (!cfg) return fail(DXM_ERR_ARG, "null config");
  return guarded([&] {
    std::string summary = dexp3m::validate_config(cfg->cfg);
    if (buf && cap > 0) {
      std::strncpy(buf, summary.c_str(), cap - 1);
      buf[cap - 1] = '\0';
    }
  });
}

dxm_status dxm_run(const dxm_config* cfg, const char* out_dir) {
  if (!cfg) return fail(DXM_ERR_ARG, "null config");
  return guarded([&] {
    dexp3m::ExperimentConfig local = cfg->cfg;
    if (out_dir) local.out_dir = out_dir;
    dexp3m::run_command(local);
  });
}

dxm_status dxm_sweep(const dxm_config* cfg, const char* out_dir) {
  if (!cfg) return fail(DXM_ERR_ARG, "null config");
  return guarded([&] {
    dexp3m::ExperimentConfig local = cfg->cfg;
    if (out_dir) local.out_dir = out_dir;
    dexp3m::sweep_command(local);
  });
}

dxm_status dxm_virtual_slot_map(const int32_t* delays, int32_t t_horizon,
                                int32_t d_bar, int32_t* t_of_tau,
                                int64_t* l_before, int64_t* s_tilde) {
  if (!delays || !t_of_tau || !l_before || !s_tilde || t_horizon < 1)
    return fail(DXM_ERR_ARG, "null argument or horizon < 1");
  return guarded([&] {
    dexp3m::DelaySchedule schedule;
    schedule.d_bar = d_bar;
    schedule.delays.assign(delays, delays + t_horizon);
    for (int d : schedule.delays) {
      if (d < 0 || d > d_bar)
        throw dexp3m::ConfigError("delay outside [0, d_bar]");
    }
    auto map = dexp3m::virtual_slot_map(schedule);
    for (const auto& row : map.rows) {
      t_of_tau[row.tau - 1] = row.t_of_tau;
      l_before[row.tau - 1] = row.l_before;
      s_tilde[row.tau - 1] = row.s_tilde;
    }
  });
}

dxm_status dxm_policy_create(int32_t K, int32_t k, int32_t d_bar, int64_t T,
                             int64_t D, uint64_t seed, dxm_policy** out) {
  if (!out) return fail(DXM_ERR_ARG, "null out pointer");
  *out = nullptr;
  return guarded([&] {
    auto params = dexp3m::params_from_horizon(K, k, d_bar, T, D);
    *out = new dxm_policy{params, dexp3m::init_policy(K), dexp3m::make_stream(seed, 1)};
  });
}

void dxm_policy_free(dxm_policy* p) { delete p; }

dxm_status dxm_policy_select(dxm_policy* p, int32_t* arms_out) {
  if (!p || !arms_out) return fail(DXM_ERR_ARG, "null argument");
  return guarded([&] {
    auto action = dexp3m::select_action(p->state, p->params, p->rng);
    for (std::size_t i = 0; i < action.arms.size(); ++i) arms_out[i] = action.arms[i];
  });
}

dxm_status dxm_policy_update(dxm_policy* p, const int32_t* arms,
                             const double* losses, int32_t n) {
  if (!p || !arms || !losses || n < 1) return fail(DXM_ERR_ARG, "null argument");
  return guarded([&] {
    std::vector<dexp3m::ArmLoss> observed(n);
    for (int32_t i = 0; i < n; ++i) observed[i] = {arms[i], losses[i]};
    auto est = dexp3m::estimate_loss(observed, p->state.p, p->params);
    dexp3m::apply_feedback_item(p->state, est, p->params);
  });
}

dxm_status dxm_policy_next_round(dxm_policy* p) {
  if (!p) return fail(DXM_ERR_ARG, "null policy");
  ++p->state.round;
  return DXM_OK;
}

dxm_status dxm_policy_probs(const dxm_policy* p, double* probs_out) {
  if (!p || !probs_out) return fail(DXM_ERR_ARG, "null argument");
  for (std::size_t i = 0; i < p->state.p.size(); ++i) probs_out[i] = p->state.p[i];
  return DXM_OK;
}

dxm_status dxm_policy_round(const dxm_policy* p, int32_t* round_out) {
  if (!p || !round_out) return fail(DXM_ERR_ARG, "null argument");
  *round_out = p->state.round;
  return DXM_OK;
}

}  // extern "C"
