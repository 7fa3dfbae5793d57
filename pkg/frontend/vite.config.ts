import { defineConfig } from "vite";

// Dev-mode proxy: `helios serve --port 8000` in one terminal, `npm run dev`
// in another. Production builds are served by `helios serve --ui dist`.
export default defineConfig({
  server: {
    proxy: {
      "/api": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "node",
  },
});
