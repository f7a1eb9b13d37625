#ifndef EPICTRL_H
#define EPICTRL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum {
  EPICTRL_STATUS_OK = 0,
  EPICTRL_STATUS_NULL_POINTER = 1,
  EPICTRL_STATUS_INVALID_ARGUMENT = 2,
  /*
   Malformed or inconsistent configuration, data or thermal scenario.
   */
  EPICTRL_STATUS_CONFIG = 3,
  /*
   Non-finite state or another numerical failure.
   */
  EPICTRL_STATUS_NUMERICAL = 4,
  EPICTRL_STATUS_IO = 5,
  EPICTRL_STATUS_OUT_OF_RANGE = 6,
  /*
   A Rust panic was caught at the boundary.
   */
  EPICTRL_STATUS_PANIC = 7,
} EpictrlStatus;

typedef enum {
  EPICTRL_CAP_DIRICHLET = 0,
  EPICTRL_CAP_INSULATED = 1,
} EpictrlCap;

typedef enum {
  EPICTRL_CRITERION_CENTER = 0,
  EPICTRL_CRITERION_VOLUME_AVERAGE = 1,
  /*
   Point given by the `probe_r`, `probe_z` arguments, metres.
   */
  EPICTRL_CRITERION_PROBE = 2,
} EpictrlCriterion;

/*
 Trajectory of one run, with its control when optimized.
 */
typedef struct EpictrlRun EpictrlRun;

/*
 A resolved scenario: parameters, grid and initial state.
 */
typedef struct EpictrlScenario EpictrlScenario;

/*
 Headline numbers of a run. Times are days since the window start.
 */
typedef struct {
  double peak_infected;
  double peak_infected_day;
  double peak_quarantined;
  double peak_quarantined_day;
  /*
   `W(t_f)`, persons vaccinated.
   */
  double doses;
  /*
   Objective value; NaN for uncontrolled runs.
   */
  double cost;
  /*
   Sweep iterations; 0 for uncontrolled runs.
   */
  uint32_t iterations;
  bool converged;
} EpictrlSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Loads a TOML scenario file, or a built-in scenario such as
 `"paper_italy"`, into `*out`.
 */
EpictrlStatus epictrl_scenario_load(const char *path, EpictrlScenario **out);

/*
 Parses a scenario from TOML text.
 */
EpictrlStatus epictrl_scenario_from_toml(const char *toml, EpictrlScenario **out);

/*
 Writes the eight initial compartments S, E, I, Q, R, D, P, W to `out`.
 */
EpictrlStatus epictrl_scenario_initial_state(const EpictrlScenario *scenario, double *out);

void epictrl_scenario_free(EpictrlScenario *scenario);

/*
 Runs the model without vaccination.
 */
EpictrlStatus epictrl_simulate(const EpictrlScenario *scenario, EpictrlRun **out);

/*
 Solves the optimal vaccination problem. A sweep that stops at the
 iteration limit still succeeds; check `converged` in the summary.
 */
EpictrlStatus epictrl_optimize(const EpictrlScenario *scenario, EpictrlRun **out);

/*
 Number of grid nodes in the run; 0 for a null handle.
 */
size_t epictrl_run_len(const EpictrlRun *run);

/*
 Grid time of `node`, days.
 */
EpictrlStatus epictrl_run_time(const EpictrlRun *run, size_t node, double *out);

/*
 Writes the eight compartments at `node` to `out`.
 */
EpictrlStatus epictrl_run_state(const EpictrlRun *run, size_t node, double *out);

/*
 Vaccination rate at `node`, 1/day. Fails for uncontrolled runs.
 */
EpictrlStatus epictrl_run_control(const EpictrlRun *run, size_t node, double *out);

EpictrlStatus epictrl_run_summary(const EpictrlRun *run, EpictrlSummary *out);

void epictrl_run_free(EpictrlRun *run);

/*
 Departure temperature (°C) that meets the scenario's target at arrival
 under the given cap condition and criterion, from the explicit FD solver.
 `out_unit_response` may be null.
 */
EpictrlStatus epictrl_transport_initial_temperature(const EpictrlScenario *scenario,
                                                    EpictrlCap cap,
                                                    EpictrlCriterion criterion,
                                                    double probe_r,
                                                    double probe_z,
                                                    double *out_temperature,
                                                    double *out_unit_response);

/*
 Message of the last failed call on this thread, or an empty string. The
 pointer stays valid until the next call into the library on this thread.
 */
const char *epictrl_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *epictrl_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EPICTRL_H */
