import { readFileSync } from "node:fs";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";

const HERE = dirname(fileURLToPath(import.meta.url));

export interface ServerInfo {
  baseUrl: string;
  dataDir: string;
}

export function serverInfo(): ServerInfo {
  return JSON.parse(readFileSync(join(HERE, ".server-info.json"), "utf-8"));
}
