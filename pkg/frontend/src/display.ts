import type { ApiClient } from "./api";
import type { Store } from "./state";

/**
 * Transparent-model toggle: informs the server (which merely stores the
 * flag) and flips the view flag. Scene data is never touched; the viewer
 * reacts by fading material opacity only.
 */
export async function setTransparentMode(
  api: ApiClient,
  store: Store,
  enabled: boolean,
): Promise<void> {
  await api.setTransparent(enabled);
  store.update({ transparent: enabled });
}
