/* C interface to the beamtrack simulation library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every call returns a bt_status; on failure the
 * message of the most recent error on the calling thread is available from
 * bt_last_error(). Strings returned through char** outputs are released with
 * bt_free_string().
 */
#ifndef BEAMTRACK_H
#define BEAMTRACK_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(BEAMTRACK_BUILDING)
#define BT_API __attribute__((visibility("default")))
#else
#define BT_API
#endif

typedef enum bt_status {
  BT_OK = 0,
  BT_ERR_INVALID_ARGUMENT = 1,
  BT_ERR_CONFIG = 2,
  BT_ERR_RUNTIME = 3,
  BT_ERR_NOT_APPLICABLE = 4,
  BT_ERR_IO = 5
} bt_status;

typedef struct bt_config bt_config;
typedef struct bt_result bt_result;
typedef struct bt_tracker bt_tracker;

BT_API const char* bt_version(void);
BT_API const char* bt_last_error(void);
/* Dotted config key named by the last BT_ERR_CONFIG, or "". */
BT_API const char* bt_last_error_field(void);
BT_API void bt_free_string(char* s);

/* kind: static, dynamic, sweep, table1, init-rate, theory, crlb.
 * json_text may be NULL or "" for the defaults of that kind. */
BT_API bt_status bt_config_from_json(const char* kind, const char* json_text, bt_config** out);
BT_API bt_status bt_config_from_file(const char* kind, const char* path, bt_config** out);
BT_API void bt_config_free(bt_config* cfg);

/* Overrides. Integer keys: antennas, data_antennas, trials, workers, slots,
 * seed. Double keys: snr_db. String keys: output_dir. */
BT_API bt_status bt_config_set_int(bt_config* cfg, const char* key, int64_t value);
BT_API bt_status bt_config_set_double(bt_config* cfg, const char* key, double value);
BT_API bt_status bt_config_set_string(bt_config* cfg, const char* key, const char* value);
BT_API bt_status bt_config_resolved_json(const bt_config* cfg, char** out_json);
BT_API bt_status bt_config_output_dir(const bt_config* cfg, char** out_dir);

/* Validates, then runs the experiment. */
BT_API bt_status bt_run(const bt_config* cfg, bt_result** out);
BT_API void bt_result_free(bt_result* res);
/* Writes all CSVs, notes and the resolved config into dir. */
BT_API bt_status bt_result_write(const bt_result* res, const char* dir);
BT_API bt_status bt_result_report(const bt_result* res, char** out_text);
BT_API bt_status bt_result_table_value(const bt_result* res, const char* table,
                                       const char* param, const char* algorithm,
                                       double* out);
/* Series value at a recorded slot. */
BT_API bt_status bt_result_series_value(const bt_result* res, const char* algorithm,
                                        const char* metric, int64_t slot, double* mean,
                                        double* stderr_out);

/* Closed-form quantities. spacing is d/lambda. */
BT_API bt_status bt_max_fisher_information(int m, double spacing, double rho, double* out);
BT_API bt_status bt_min_crlb(int m, double spacing, double rho, int64_t n, double* out);
BT_API bt_status bt_channel_crlb_limit(int m, double spacing, double sigma2,
                                       double pilot_power, double* out);
BT_API bt_status bt_alpha_star(int m, double spacing, double* out);
BT_API bt_status bt_f_gain(int m, double spacing, double v, double x, double* out);

/* Single recursive tracker driven by caller-supplied observations.
 * fixed != 0 selects a constant step alpha, otherwise alpha/(n + n0). */
BT_API bt_status bt_tracker_create(int m, double spacing, double alpha, double n0, int fixed,
                                   double x0, bt_tracker** out);
BT_API void bt_tracker_free(bt_tracker* t);
/* Pilot beamformer for the next slot: len must equal m. */
BT_API bt_status bt_tracker_weights(const bt_tracker* t, double* re, double* im, int len);
BT_API bt_status bt_tracker_update(bt_tracker* t, double y_re, double y_im, double* estimate);
BT_API bt_status bt_tracker_estimate(const bt_tracker* t, double* estimate);

#ifdef __cplusplus
}
#endif

#endif /* BEAMTRACK_H */
