export const TEST_PORT = 8787;
export const TEST_API = `http://127.0.0.1:${TEST_PORT}`;
