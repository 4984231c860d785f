/* C interface to the aqmsim simulator.
 *
 * Every function returns an aqmsim_status; on failure aqmsim_last_error()
 * holds a message for the calling thread. Handles are opaque and released
 * with their matching *_free function (NULL is accepted). */
#ifndef AQMSIM_AQMSIM_H
#define AQMSIM_AQMSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(AQMSIM_BUILDING_LIBRARY)
#    define AQMSIM_API __declspec(dllexport)
#  else
#    define AQMSIM_API __declspec(dllimport)
#  endif
#else
#  define AQMSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aqmsim_status {
  AQMSIM_OK = 0,
  AQMSIM_E_INVALID_ARG = 1,
  AQMSIM_E_PARSE = 2,          /* malformed or unknown keys */
  AQMSIM_E_VALIDATION = 3,     /* well-formed but out of range */
  AQMSIM_E_UNKNOWN_PRESET = 4,
  AQMSIM_E_IO = 5,
  AQMSIM_E_NO_SWEEP = 6,       /* sweep requested on a document without one */
  AQMSIM_E_INTERNAL = 7
} aqmsim_status;

typedef struct aqmsim_scenario aqmsim_scenario;
typedef struct aqmsim_report aqmsim_report;
typedef struct aqmsim_sweep aqmsim_sweep;

typedef enum aqmsim_flow_kind { AQMSIM_FLOW_TCP = 0, AQMSIM_FLOW_UDP = 1 } aqmsim_flow_kind;

typedef struct aqmsim_flow_stats {
  uint32_t flow_id;
  aqmsim_flow_kind kind;
  uint64_t delivered_bytes; /* measurement window */
  uint64_t dropped_packets; /* measurement window */
  double throughput_bps;
} aqmsim_flow_stats;

typedef struct aqmsim_summary {
  double utilization;
  double jain_index;
  double tcp_share;
  double udp_share;
  double tcp_throughput_bps;
  double udp_throughput_bps;
  double mean_ewma_qlen; /* packets, averaged over the measurement window */
  double mean_ewma_tcp;
  double mean_ewma_udp;
  double buffer_packets;
  double window_s;
} aqmsim_summary;

AQMSIM_API const char* aqmsim_version(void);
/* Message of the last failed call on this thread; "" if none. */
AQMSIM_API const char* aqmsim_last_error(void);
AQMSIM_API const char* aqmsim_status_name(aqmsim_status status);

/* Scenarios */
AQMSIM_API aqmsim_status aqmsim_scenario_parse(const char* text, aqmsim_scenario** out);
AQMSIM_API aqmsim_status aqmsim_scenario_load(const char* path, aqmsim_scenario** out);
AQMSIM_API aqmsim_status aqmsim_scenario_from_preset(const char* name, aqmsim_scenario** out);
/* Overrides one key and revalidates; the scenario is unchanged on failure. */
AQMSIM_API aqmsim_status aqmsim_scenario_set(aqmsim_scenario* scenario, const char* key,
                                             const char* value);
/* Copies the key = value text into buf (NUL-terminated, truncated to cap).
 * *needed receives the full length including the terminator. */
AQMSIM_API aqmsim_status aqmsim_scenario_emit(const aqmsim_scenario* scenario, char* buf,
                                              size_t cap, size_t* needed);
AQMSIM_API int aqmsim_scenario_is_sweep(const aqmsim_scenario* scenario);
AQMSIM_API void aqmsim_scenario_free(aqmsim_scenario* scenario);

AQMSIM_API size_t aqmsim_preset_count(void);
/* NULL when index is out of range. */
AQMSIM_API const char* aqmsim_preset_name(size_t index);

/* Single runs (any sweep block is ignored) */
AQMSIM_API aqmsim_status aqmsim_run(const aqmsim_scenario* scenario, aqmsim_report** out);
AQMSIM_API aqmsim_status aqmsim_report_summary(const aqmsim_report* report, aqmsim_summary* out);
AQMSIM_API size_t aqmsim_report_flow_count(const aqmsim_report* report);
AQMSIM_API aqmsim_status aqmsim_report_flow(const aqmsim_report* report, size_t index,
                                            aqmsim_flow_stats* out);
/* Writes flows.csv, queue.csv, summary.csv and series/ under dir. */
AQMSIM_API aqmsim_status aqmsim_report_write_csv(const aqmsim_report* report, const char* dir);
AQMSIM_API void aqmsim_report_free(aqmsim_report* report);

/* Sweeps; jobs > 1 runs points on that many threads */
AQMSIM_API aqmsim_status aqmsim_sweep_run(const aqmsim_scenario* scenario, unsigned jobs,
                                          aqmsim_sweep** out);
AQMSIM_API size_t aqmsim_sweep_row_count(const aqmsim_sweep* sweep);
/* Label and report are owned by the sweep. */
AQMSIM_API const char* aqmsim_sweep_row_label(const aqmsim_sweep* sweep, size_t row);
AQMSIM_API uint64_t aqmsim_sweep_row_seed(const aqmsim_sweep* sweep, size_t row);
AQMSIM_API const aqmsim_report* aqmsim_sweep_row_report(const aqmsim_sweep* sweep, size_t row);
AQMSIM_API aqmsim_status aqmsim_sweep_write_csv(const aqmsim_sweep* sweep, const char* dir);
AQMSIM_API void aqmsim_sweep_free(aqmsim_sweep* sweep);

#ifdef __cplusplus
}
#endif

#endif
