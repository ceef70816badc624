/* sdc - statistical disclosure control toolkit, public C API.
 *
 * Every object is an opaque handle created and released by this library.
 * Functions return SDC_OK on success; on failure they return a status code
 * and leave a human-readable message in sdc_last_error() (thread-local,
 * valid until the next failing call on the same thread). Output parameters
 * are written only on success.
 *
 * Strings returned through char** out-parameters are heap-allocated; release
 * them with sdc_string_free(). Record indices are 0-based throughout.
 */
#ifndef SDC_SDC_H
#define SDC_SDC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sdc_status {
    SDC_OK = 0,
    SDC_ERROR_USAGE = 1,   /* bad arguments, malformed inputs, failed preconditions */
    SDC_ERROR_RUNTIME = 2, /* data-dependent failure while executing a valid request */
    SDC_ERROR_BUDGET = 3   /* dp budget exhausted; the ledger is unchanged */
} sdc_status;

typedef struct sdc_schema sdc_schema;
typedef struct sdc_table sdc_table;

const char* sdc_version(void);
const char* sdc_last_error(void);
void sdc_string_free(char* text);

/* --- schema and tables -------------------------------------------------- */

/* Schema descriptor file: one `name,kind,class[,hierarchy=PATH][,bounds=LO:HI]`
 * line per attribute. */
sdc_status sdc_schema_load(const char* path, sdc_schema** out);
void sdc_schema_free(sdc_schema* schema);

/* CSV with a mandatory header matching the schema. */
sdc_status sdc_table_load(const char* csv_path, const sdc_schema* schema, sdc_table** out);
sdc_status sdc_table_emit(const sdc_table* table, const char* csv_path);
void sdc_table_free(sdc_table* table);

int64_t sdc_table_records(const sdc_table* table);
int64_t sdc_table_attributes(const sdc_table* table);
sdc_status sdc_table_attribute_name(const sdc_table* table, int64_t index, char** out);
/* *out is NULL for a missing cell. */
sdc_status sdc_table_cell(const sdc_table* table, int64_t row, const char* attr, char** out);
/* Schema plus per-column statistics, one block per attribute. */
sdc_status sdc_table_inspect(const sdc_table* table, char** out);

/* --- non-perturbative methods -------------------------------------------- */

/* selector: "rows=0,2,5" | "equals=VALUE" | "extremes=both|high|low". */
sdc_status sdc_suppress_cells(const sdc_table* table, const char* attr, const char* selector,
                              sdc_table** out);
sdc_status sdc_suppress_records(const sdc_table* table, const int64_t* rows, size_t row_count,
                                sdc_table** out);
sdc_status sdc_generalize(const sdc_table* table, const char* attr, int64_t level,
                          sdc_table** out);

/* pass/k_achieved/assessment are each optional (NULL to skip). */
sdc_status sdc_verify_k_anonymity(const sdc_table* table, const char* const* quasi,
                                  size_t quasi_count, int64_t k, int* pass,
                                  int64_t* k_achieved, char** assessment);
sdc_status sdc_verify_l_diversity(const sdc_table* table, const char* const* quasi,
                                  size_t quasi_count, const char* sensitive, int64_t k,
                                  int64_t l, int* pass, int64_t* k_achieved,
                                  int64_t* l_achieved, char** assessment);
sdc_status sdc_enforce_k_anonymity(const sdc_table* table, const char* const* quasi,
                                   size_t quasi_count, int64_t k, sdc_table** out,
                                   char** report);

/* --- perturbative methods ------------------------------------------------- */

/* variance < 0 selects the default sigma = 0.1 * sample std. */
sdc_status sdc_add_noise(const sdc_table* table, const char* attr, double variance,
                         uint64_t seed, sdc_table** out);
sdc_status sdc_multiply_noise(const sdc_table* table, const char* attr, double variance,
                              uint64_t seed, sdc_table** out);
sdc_status sdc_log_multiply_noise(const sdc_table* table, const char* attr, double mean,
                                  double variance, uint64_t seed, sdc_table** out);
/* pair_rows holds pair_count (a, b) pairs flattened: a0,b0,a1,b1,... */
sdc_status sdc_swap_values(const sdc_table* table, const char* const* attrs, size_t attr_count,
                           const int64_t* pair_rows, size_t pair_count, sdc_table** out);
sdc_status sdc_random_swap(const sdc_table* table, const char* const* attrs, size_t attr_count,
                           double fraction, uint64_t seed, sdc_table** out);
/* Thresholds: decimal number or "pNN" percentile; NULL for none. NULL labels
 * pick "<LO" / ">HI" with the resolved cutoff. */
sdc_status sdc_code_extremes(const sdc_table* table, const char* attr, const char* low,
                             const char* high, const char* low_label, const char* high_label,
                             sdc_table** out);
sdc_status sdc_round_values(const sdc_table* table, const char* attr, double base,
                            sdc_table** out);
sdc_status sdc_recode_ranges(const sdc_table* table, const char* attr, const double* breaks,
                             size_t break_count, const char* const* labels, size_t label_count,
                             sdc_table** out);
sdc_status sdc_blank_and_impute(const sdc_table* table, const char* attr, const int64_t* rows,
                                size_t row_count, sdc_table** out);
sdc_status sdc_blur(const sdc_table* table, const char* attr, const char* const* quasi,
                    size_t quasi_count, const int64_t* rows, size_t row_count, sdc_table** out);
sdc_status sdc_synthesize(const sdc_table* table, uint64_t seed, sdc_table** out);

/* --- differential privacy -------------------------------------------------- */

/* query: count | sum(Attr) | mean(Attr) [hint N] [where Attr OP value].
 * The ledger file is created with total_epsilon when absent; when it exists,
 * total_epsilon must be negative (keep the file's total) or equal to it.
 * The file is locked exclusively for the duration of the call. On success
 * *answer receives the noisy value and *remaining the budget left. On
 * SDC_ERROR_BUDGET the ledger file is untouched and *remaining is still
 * written. */
sdc_status sdc_dp_query(const sdc_table* table, const char* query, double epsilon,
                        const char* ledger_path, double total_epsilon, uint64_t seed,
                        double* answer, double* remaining);

/* --- utility metrics ---------------------------------------------------------- */

/* KS statistic (continuous) or total-variation distance (categorical), in [0,1]. */
sdc_status sdc_distribution_distance(const sdc_table* original, const sdc_table* privatized,
                                     const char* attr, double* out);

/* options: newline- or semicolon-separated key=value pairs, all optional:
 *   attrs=a,b  quasi=a,b  sensitive=x  k=2  l=2
 *   label=y  features=p,q  folds=N  seed=N
 * NULL compares every shared attribute. */
sdc_status sdc_build_report(const sdc_table* original, const sdc_table* privatized,
                            const char* options, char** out);

sdc_status sdc_scatter_export(const sdc_table* table, const char* x_attr, const char* y_attr,
                              const char* label_attr, const char* csv_path);

/* --- pipelines and demos -------------------------------------------------------- */

/* Runs a pipeline config file end to end (see the config grammar in the
 * README). seed_override, when non-NULL, wins over the config seed. */
sdc_status sdc_pipeline_run(const char* config_path, const uint64_t* seed_override,
                            char** summary);

/* Iris noise-addition demo; sigma_scale scales each attribute's sample std. */
sdc_status sdc_iris_demo(const char* iris_csv, const char* out_dir, uint64_t seed,
                         double sigma_scale, char** summary);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SDC_SDC_H */
