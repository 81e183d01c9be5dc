// Recorded API responses (see scripts/record_api_fixtures.py in the repo
// root). These are the contract the UI is tested against.

import { readFileSync, readdirSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const dir = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(dir, name), "utf-8")) as T;
}

export function interactionFixtureNames(): string[] {
  return readdirSync(dir).filter((f) => f.startsWith("interaction_"));
}
