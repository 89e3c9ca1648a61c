#include <stdio.h>

#include "gwpdyn/gwpdyn.h"

int main(void) {
  gwp_config* cfg = NULL;
  if (gwp_config_preset("dw-over", 0, &cfg) != GWP_OK) return 1;
  gwp_config_free(cfg);
  printf("%s %s\n", gwp_version(), gwp_status_name(GWP_ERR_CONFIG));
  return 0;
}
