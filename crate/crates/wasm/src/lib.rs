//! Browser bindings for the `www/` demo page.

pub mod demo;

use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Curve(demo::Curve);

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn t(&self) -> Vec<f64> {
        self.0.t.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn y(&self) -> Vec<f64> {
        self.0.y.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn functional(&self) -> f64 {
        self.0.functional
    }

    #[wasm_bindgen(getter, js_name = residualMax)]
    pub fn residual_max(&self) -> f64 {
        self.0.residual_max
    }

    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.0.iterations
    }

    #[wasm_bindgen(getter)]
    pub fn lambda(&self) -> f64 {
        self.0.lambda
    }

    /// `undefined` for unconstrained problems.
    #[wasm_bindgen(getter)]
    pub fn normal(&self) -> Option<bool> {
        self.0.normal
    }
}

#[wasm_bindgen]
pub struct Profile(demo::Profile);

#[wasm_bindgen]
impl Profile {
    #[wasm_bindgen(getter)]
    pub fn t(&self) -> Vec<f64> {
        self.0.t.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn f(&self) -> Vec<f64> {
        self.0.f.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn value(&self) -> f64 {
        self.0.value
    }

    #[wasm_bindgen(getter)]
    pub fn forward(&self) -> f64 {
        self.0.forward
    }

    #[wasm_bindgen(getter)]
    pub fn backward(&self) -> f64 {
        self.0.backward
    }

    #[wasm_bindgen(getter, js_name = forwardEstimate)]
    pub fn forward_estimate(&self) -> f64 {
        self.0.forward_estimate
    }

    #[wasm_bindgen(getter, js_name = backwardEstimate)]
    pub fn backward_estimate(&self) -> f64 {
        self.0.backward_estimate
    }
}

#[wasm_bindgen]
pub fn extremal(scale: &str, lagrangian: &str, u: f64, alpha: f64, beta: f64, h: f64) -> Result<Curve, JsError> {
    demo::extremal(scale, lagrangian, u, alpha, beta, h).map(Curve).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn isoperimetric(
    scale: &str,
    lagrangian: &str,
    constraint: &str,
    u: f64,
    w: f64,
    k: f64,
    alpha: f64,
    beta: f64,
    h: f64,
) -> Result<Curve, JsError> {
    demo::isoperimetric(scale, lagrangian, constraint, u, w, k, alpha, beta, h).map(Curve).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = epiderivativeProfile)]
pub fn epiderivative_profile(scale: &str, f: &str, at: f64, h: f64) -> Result<Profile, JsError> {
    demo::epiderivative_profile(scale, f, at, h).map(Profile).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = scaleBounds)]
pub fn scale_bounds(scale: &str) -> Result<Vec<f64>, JsError> {
    demo::scale_bounds(scale).map(|b| b.to_vec()).map_err(|e| JsError::new(&e))
}
