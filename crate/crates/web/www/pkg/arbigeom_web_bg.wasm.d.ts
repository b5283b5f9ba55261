/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const census_json: (a: number, b: number, c: bigint) => [number, number, number, number];
export const qtable_json: (a: number, b: number) => [number, number];
export const sweep_json: (a: number, b: bigint, c: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
