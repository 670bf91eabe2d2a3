use crate::instance::Instance;

/// Arc costs shifted by per-node Lagrangian penalties:
/// `effective(u, v) = base(u, v) + pi_out[u] + pi_in[v]`.
#[derive(Debug, Clone)]
pub struct CostModel<'a> {
    inst: &'a Instance,
    pub pi_in: Vec<f64>,
    pub pi_out: Vec<f64>,
}

impl<'a> CostModel<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        CostModel { inst, pi_in: vec![0.0; inst.n], pi_out: vec![0.0; inst.n] }
    }

    pub fn with_penalties(inst: &'a Instance, pi_in: Vec<f64>, pi_out: Vec<f64>) -> Self {
        assert_eq!(pi_in.len(), inst.n);
        assert_eq!(pi_out.len(), inst.n);
        CostModel { inst, pi_in, pi_out }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    #[inline]
    pub fn base(&self, u: usize, v: usize) -> i64 {
        self.inst.raw_cost(u, v)
    }

    #[inline]
    pub fn effective(&self, u: usize, v: usize) -> f64 {
        self.inst.raw_cost(u, v) as f64 + self.pi_out[u] + self.pi_in[v]
    }

    /// Amount added to the cost of any Hamiltonian s→e path by the penalties.
    pub fn penalty_sum(&self) -> f64 {
        let (s, e) = (self.inst.s, self.inst.e);
        let outs: f64 = (0..self.inst.n).filter(|&v| v != e).map(|v| self.pi_out[v]).sum();
        let ins: f64 = (0..self.inst.n).filter(|&v| v != s).map(|v| self.pi_in[v]).sum();
        outs + ins
    }
}
