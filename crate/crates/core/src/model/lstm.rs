//! Single-layer LSTM language model over token ids. Parameters live in a
//! `ParamStore` under fixed names; the plain-value forward path serves
//! inference and the graph path serves training. Both implement the same
//! gate equations, so their states agree bit for bit.

use serde::{Deserialize, Serialize};

use crate::numeric::graph::{Graph, Vid};
use crate::numeric::{stable_softmax, Init, ParamStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LstmDims {
    pub vocab: usize,
    pub embed: usize,
    pub hidden: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LstmState {
    pub cell: Vec<f64>,
    pub h: Vec<f64>,
}

const GATES: [&str; 4] = ["i", "f", "o", "g"];

#[derive(Debug, Clone, Copy)]
pub struct LstmLm {
    pub dims: LstmDims,
}

impl LstmLm {
    pub fn new(dims: LstmDims) -> Self {
        LstmLm { dims }
    }

    /// Register all parameters with their init policies: embeddings uniform
    /// in [-1, 1], forget-gate bias 1.0, output projection uniform in
    /// [-0.1, 0.1] (all-zero projection passes no gradient into the LSTM),
    /// everything else zero.
    pub fn register(&self, store: &mut ParamStore) {
        let d = self.dims;
        store.register("embed", &[d.vocab, d.embed], Init::Uniform { lo: -1.0, hi: 1.0 });
        for gate in GATES {
            store.register(&format!("lstm.w_{gate}"), &[d.hidden, d.embed], Init::Zero);
            store.register(&format!("lstm.u_{gate}"), &[d.hidden, d.hidden], Init::Zero);
            let bias_init = if gate == "f" { Init::Const(1.0) } else { Init::Zero };
            store.register(&format!("lstm.b_{gate}"), &[d.hidden], bias_init);
        }
        store.register("out.w", &[d.vocab, d.hidden], Init::Uniform { lo: -0.1, hi: 0.1 });
        store.register("out.b", &[d.vocab], Init::Zero);
    }

    pub fn initial_state(&self) -> LstmState {
        LstmState { cell: vec![0.0; self.dims.hidden], h: vec![0.0; self.dims.hidden] }
    }

    /// One step on an explicit embedding vector.
    pub fn step_embedding(&self, store: &ParamStore, prev: &LstmState, x: &[f64]) -> LstmState {
        assert_eq!(x.len(), self.dims.embed, "embedding dimension");
        let gate = |name: &str| -> Vec<f64> {
            let w = store.get(&format!("lstm.w_{name}"));
            let u = store.get(&format!("lstm.u_{name}"));
            let b = store.get(&format!("lstm.b_{name}"));
            (0..self.dims.hidden)
                .map(|r| {
                    let wx: f64 = w.row(r).iter().zip(x).map(|(a, b)| a * b).sum();
                    let uh: f64 = u.row(r).iter().zip(&prev.h).map(|(a, b)| a * b).sum();
                    wx + uh + b.values[r]
                })
                .collect()
        };
        let sigmoid = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(|z| 1.0 / (1.0 + (-z).exp())).collect() };
        let i = sigmoid(gate("i"));
        let f = sigmoid(gate("f"));
        let o = sigmoid(gate("o"));
        let g: Vec<f64> = gate("g").into_iter().map(f64::tanh).collect();

        let cell: Vec<f64> = (0..self.dims.hidden)
            .map(|r| f[r] * prev.cell[r] + i[r] * g[r])
            .collect();
        let h: Vec<f64> = (0..self.dims.hidden).map(|r| o[r] * cell[r].tanh()).collect();
        LstmState { cell, h }
    }

    pub fn step(&self, store: &ParamStore, prev: &LstmState, token: usize) -> LstmState {
        let x = store.get("embed").row(token).to_vec();
        self.step_embedding(store, prev, &x)
    }

    /// States for a whole sequence: n+1 entries, `run[0]` initial and
    /// `run[t+1]` after consuming `tokens[t]`.
    pub fn run(&self, store: &ParamStore, tokens: &[usize]) -> Vec<LstmState> {
        let mut states = Vec::with_capacity(tokens.len() + 1);
        states.push(self.initial_state());
        for &token in tokens {
            let next = self.step(store, states.last().expect("nonempty"), token);
            states.push(next);
        }
        states
    }

    /// softmax(out.w · h + out.b): the next-token distribution.
    pub fn next_distribution(&self, store: &ParamStore, state: &LstmState) -> Vec<f64> {
        let w = store.get("out.w");
        let b = store.get("out.b");
        let logits: Vec<f64> = (0..self.dims.vocab)
            .map(|r| {
                let wh: f64 = w.row(r).iter().zip(&state.h).map(|(a, b)| a * b).sum();
                wh + b.values[r]
            })
            .collect();
        stable_softmax(&logits)
    }

    // ---- graph (training) path ------------------------------------------

    pub fn initial_state_graph(&self, g: &mut Graph) -> (Vid, Vid) {
        let cell = g.value(vec![0.0; self.dims.hidden]);
        let h = g.value(vec![0.0; self.dims.hidden]);
        (cell, h)
    }

    pub fn step_graph(&self, g: &mut Graph, prev: (Vid, Vid), token: usize) -> (Vid, Vid) {
        let x = g.embed_row("embed", token);
        self.step_graph_embedding(g, prev, x)
    }

    pub fn step_graph_embedding(&self, g: &mut Graph, prev: (Vid, Vid), x: Vid) -> (Vid, Vid) {
        let (prev_cell, prev_h) = prev;
        let mut gates = Vec::with_capacity(4);
        for gate in GATES {
            let wx = g.matvec_param(&format!("lstm.w_{gate}"), x);
            let uh = g.matvec_param(&format!("lstm.u_{gate}"), prev_h);
            let sum = g.add(wx, uh);
            gates.push(g.add_param(&format!("lstm.b_{gate}"), sum));
        }
        let i = g.sigmoid(gates[0]);
        let f = g.sigmoid(gates[1]);
        let o = g.sigmoid(gates[2]);
        let gg = g.tanh(gates[3]);
        let keep = g.mul(f, prev_cell);
        let write = g.mul(i, gg);
        let cell = g.add(keep, write);
        let cell_t = g.tanh(cell);
        let h = g.mul(o, cell_t);
        (cell, h)
    }

    pub fn logits_graph(&self, g: &mut Graph, h: Vid) -> Vid {
        let wh = g.matvec_param("out.w", h);
        g.add_param("out.b", wh)
    }

    /// Mean next-token cross-entropy over a sequence (targets are positions
    /// 1..n, each predicted from the consumed prefix).
    pub fn lm_loss_graph(&self, g: &mut Graph, tokens: &[usize]) -> Option<Vid> {
        if tokens.len() < 2 {
            return None;
        }
        let mut state = self.initial_state_graph(g);
        let mut losses = Vec::with_capacity(tokens.len() - 1);
        for t in 0..tokens.len() - 1 {
            state = self.step_graph(g, state, tokens[t]);
            let logits = self.logits_graph(g, state.1);
            losses.push(g.softmax_ce_index(logits, tokens[t + 1]));
        }
        Some(g.mean(losses))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::grad_check;

    fn toy() -> (LstmLm, ParamStore) {
        let lm = LstmLm::new(LstmDims { vocab: 5, embed: 3, hidden: 4 });
        let mut store = ParamStore::new();
        lm.register(&mut store);
        store.init(1);
        (lm, store)
    }

    #[test]
    fn zero_weights_zero_input_give_zero_h() {
        let lm = LstmLm::new(LstmDims { vocab: 3, embed: 2, hidden: 3 });
        let mut store = ParamStore::new();
        lm.register(&mut store);
        // leave everything at zero (no init call): h = o*tanh(c) = 0.5*0
        let state = lm.step_embedding(&store, &lm.initial_state(), &[0.0, 0.0]);
        assert!(state.h.iter().all(|&v| v == 0.0));
        assert!(state.cell.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn repeated_steps_stay_finite_with_forget_bias_one() {
        let (lm, store) = toy();
        let mut state = lm.initial_state();
        for t in 0..200 {
            state = lm.step(&store, &state, t % 5);
            assert!(state.h.iter().all(|v| v.is_finite()));
            assert!(state.cell.iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn zero_init_policy_yields_exactly_uniform_distribution() {
        // h stays exactly zero under zero LSTM weights, so logits equal
        // out.b = 0 and the distribution is uniform
        let (lm, store) = toy();
        let run = lm.run(&store, &[0, 1, 2, 3]);
        for state in &run {
            let dist = lm.next_distribution(&store, state);
            for p in &dist {
                assert_eq!(*p, 1.0 / 5.0);
            }
        }
    }

    #[test]
    fn forced_projection_concentrates_mass() {
        let (lm, mut store) = toy();
        // drive logit of token 2 up regardless of h: bias does it exactly
        store.get_mut("out.b").values[2] = 50.0;
        let dist = lm.next_distribution(&store, &lm.initial_state());
        assert!(dist[2] > 1.0 - 1e-12);
    }

    #[test]
    fn distribution_sums_to_one() {
        let (lm, mut store) = toy();
        store.get_mut("lstm.w_i").values.iter_mut().enumerate().for_each(|(i, v)| {
            *v = ((i as f64) * 0.37).sin() * 0.5;
        });
        let run = lm.run(&store, &[4, 3, 2, 1, 0]);
        for state in &run {
            let dist = lm.next_distribution(&store, state);
            assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn graph_and_value_paths_agree() {
        let (lm, mut store) = toy();
        // break zero symmetry so the test is not trivial
        for (i, v) in store.get_mut("lstm.u_f").values.iter_mut().enumerate() {
            *v = ((i * 7 % 5) as f64 - 2.0) * 0.1;
        }
        let tokens = [1usize, 4, 2, 2, 0];
        let plain = lm.run(&store, &tokens);

        let mut g = Graph::new(&store);
        let mut state = lm.initial_state_graph(&mut g);
        let mut hs = Vec::new();
        for &t in &tokens {
            state = lm.step_graph(&mut g, state, t);
            hs.push(state.1);
        }
        for (t, h) in hs.iter().enumerate() {
            for (a, b) in g.val(*h).iter().zip(&plain[t + 1].h) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn lstm_gradients_pass_finite_difference_check() {
        let (lm, mut store) = toy();
        let tokens = [0usize, 2, 4, 1];
        let loss_fn = |s: &ParamStore| {
            let mut g = Graph::new(s);
            let loss = lm.lm_loss_graph(&mut g, &tokens).expect("loss");
            g.scalar(loss)
        };
        let report = grad_check(
            &mut store,
            1e-4,
            1e-5,
            loss_fn,
            |s| {
                let grads = {
                    let mut g = Graph::new(s);
                    let loss = lm.lm_loss_graph(&mut g, &tokens).expect("loss");
                    g.backward(loss)
                };
                s.accumulate_grads(grads);
            },
        )
        .unwrap();
        assert!(report.pass, "max rel err {}", report.max_rel_err);
    }
}
