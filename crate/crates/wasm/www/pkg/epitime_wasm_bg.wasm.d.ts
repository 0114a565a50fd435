/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curve_free: (a: number, b: number) => void;
export const __wbg_profile_free: (a: number, b: number) => void;
export const curve_functional: (a: number) => number;
export const curve_iterations: (a: number) => number;
export const curve_lambda: (a: number) => number;
export const curve_normal: (a: number) => number;
export const curve_residualMax: (a: number) => number;
export const curve_t: (a: number) => [number, number];
export const curve_y: (a: number) => [number, number];
export const epiderivativeProfile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const extremal: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const isoperimetric: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number, l: number) => [number, number, number];
export const profile_backward: (a: number) => number;
export const profile_backwardEstimate: (a: number) => number;
export const profile_f: (a: number) => [number, number];
export const profile_forward: (a: number) => number;
export const profile_forwardEstimate: (a: number) => number;
export const profile_t: (a: number) => [number, number];
export const profile_value: (a: number) => number;
export const scaleBounds: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
