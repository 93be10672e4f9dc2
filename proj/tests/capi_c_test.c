/* Compiled as C to check that the public header is valid C. */
#include <math.h>
#include <stdio.h>

#include "dflab/dflab.h"

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                   \
    }                                                             \
  } while (0)

int main(void) {
  dflab_domain* d = NULL;
  dflab_form* f = NULL;
  double mu[2] = {INFINITY, 2.0};
  double s[9];
  int verdict = -1;
  char* report = NULL;

  EXPECT(dflab_domain_interval(3, 2.0, &d) == DFLAB_OK);
  EXPECT(dflab_form_robin(d, mu, 2, &f) == DFLAB_OK);
  EXPECT(dflab_expm(f, 0.0, s, 9) == DFLAB_OK);
  EXPECT(s[0] == 0.0 && s[4] == 1.0 && s[8] == 1.0);
  EXPECT(dflab_extract_measure(f, &verdict, &report) == DFLAB_OK);
  EXPECT(verdict == 1);
  dflab_string_free(report);
  EXPECT(dflab_domain_interval(1, 1.0, &d) == DFLAB_ERR_INVALID_DOMAIN);
  EXPECT(dflab_last_error()[0] != '\0');
  dflab_form_free(f);
  dflab_domain_free(d);
  printf("C API ok (%s)\n", dflab_version());
  return 0;
}
