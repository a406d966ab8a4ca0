use num_traits::Zero;

use super::field::{exp_ad, GradedField};
use super::{EngineConfig, PivotOrder};
use crate::abasis::{ad_matrix, AElement, LinComb};
use crate::coeff::{RingElem, RingSpec, Q};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};

/// A generator applied by the driver, labelled `t_degree^page`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformGenerator {
    pub element: AElement,
    pub degree: i32,
    pub page: i32,
}

impl TransformGenerator {
    /// A generator is effective when it is nonzero over the residue field.
    pub fn is_effective(&self) -> bool {
        !self.element.residue().is_zero()
    }
}

/// Splitting `G_p = k_p + i_p` for one degree.
#[derive(Debug, Clone)]
struct Piece {
    /// Kernel basis (coordinates in `GradeBasis(p)`), in working order.
    kbasis: Vec<Vec<Q>>,
    /// `kperm[i]` is the canonical (ascending echelon) index of `kbasis[i]`.
    kperm: Vec<usize>,
    ibasis: Vec<Vec<Q>>,
    /// Grade coordinates to `[k coords; i coords]`.
    split: Matrix<Q>,
    /// Inverse of `ad(res v_0)` on `i_p`, in `i` coordinates.
    ad_i_inv: Matrix<Q>,
}

impl Piece {
    fn split_q(&self, x: &[Q]) -> (Vec<Q>, Vec<Q>) {
        let mut y = self.split.mul_vec(x);
        let i = y.split_off(self.kbasis.len());
        (y, i)
    }

    fn split_r(&self, x: &[RingElem], spec: RingSpec) -> (Vec<RingElem>, Vec<RingElem>) {
        let lifted = self.split.map(spec, |q| RingElem::from_rational(spec, q.clone()));
        let mut y = lifted.mul_vec(x);
        let i = y.split_off(self.kbasis.len());
        (y, i)
    }

    fn kdim(&self) -> usize {
        self.kbasis.len()
    }
}

/// A row of an echelon form whose operations are mirrored on a chain.
#[derive(Debug, Clone, PartialEq)]
struct ChainRow {
    key: Vec<Q>,
    tail: Vec<Q>,
    chain: LinComb<Q>,
}

impl ChainRow {
    fn sub_scaled(&mut self, a: &Q, other: &ChainRow) {
        for (x, y) in self.key.iter_mut().zip(&other.key) {
            if !y.is_zero() {
                *x -= a * y;
            }
        }
        for (x, y) in self.tail.iter_mut().zip(&other.tail) {
            if !y.is_zero() {
                *x -= a * y;
            }
        }
        self.chain = self.chain.sub(&other.chain.scale_q(a));
    }

    fn scale(&mut self, a: &Q) {
        for x in self.key.iter_mut().chain(self.tail.iter_mut()) {
            *x *= a;
        }
        self.chain = self.chain.scale_q(a);
    }

    fn pivot(&self) -> Option<usize> {
        self.key.iter().position(|x| !x.is_zero())
    }
}

/// Reduced row echelon form on `key`; returns (pivot rows, zero rows).
fn rref(mut rows: Vec<ChainRow>) -> (Vec<ChainRow>, Vec<ChainRow>) {
    let ncols = rows.first().map_or(0, |r| r.key.len());
    let mut done = 0;
    for c in 0..ncols {
        let Some(found) = (done..rows.len()).find(|&i| !rows[i].key[c].is_zero()) else {
            continue;
        };
        rows.swap(done, found);
        let inv = rows[done].key[c].recip();
        rows[done].scale(&inv);
        let pivot = rows[done].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != done && !row.key[c].is_zero() {
                let a = row.key[c].clone();
                row.sub_scaled(&a, &pivot);
            }
        }
        done += 1;
    }
    let zero = rows.split_off(done);
    (rows, zero)
}

/// Matrix of a differential `d_p^r : T_p -> N_{p+r}` over the residue field.
#[derive(Debug, Clone)]
pub struct Differential {
    /// Rows are normal-form directions of the target, columns the
    /// transformation basis of the source.
    pub matrix: Matrix<Q>,
    /// Leading (degree `p`) part of each transformation.
    pub domain: Vec<LinComb<Q>>,
    /// Surviving normal-form directions at degree `p + r`.
    pub codomain: Vec<LinComb<Q>>,
}

/// The page `E_r` truncated at degree `n`, together with the current field.
#[derive(Debug, Clone)]
pub struct PageState {
    spec: RingSpec,
    n: i32,
    r: i32,
    normalized_through: i32,
    config: EngineConfig,
    field: GradedField,
    residue: LinComb<Q>,
    pieces: Vec<Piece>,
    /// Per degree: inverse over `R` of `ad(v_0)` on `i_p`.
    ad_i_inv_r: Vec<Option<Matrix<RingElem>>>,
    trans: Vec<Vec<ChainRow>>,
    image: Vec<Vec<ChainRow>>,
    log: Vec<TransformGenerator>,
}

/// Normalized field, final page, and the generators that produced it.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub field: GradedField,
    pub state: PageState,
    pub log: Vec<TransformGenerator>,
}

fn validate(v: &GradedField, n: i32) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidTruncation(format!("truncation degree must be at least 1, got {n}")));
    }
    if v.element().min_degree().is_some_and(|d| d < 0) {
        return Err(Error::ConstantTerms);
    }
    if v.linear_part().residue().is_zero() {
        return Err(Error::ZeroLinearPart);
    }
    Ok(())
}

fn build_piece(v0: &LinComb<Q>, p: i32, order: PivotOrder) -> Result<Piece> {
    let m = ad_matrix(v0, p, p, ());
    let dim = m.rows();
    let ker = Subspace::kernel(&m);
    let im = Subspace::image(&m);
    if ker.sum(&im).dim() != dim {
        return Err(Error::NonSemisimple { degree: p });
    }
    let mut kbasis: Vec<Vec<Q>> = ker.basis().to_vec();
    let mut kperm: Vec<usize> = (0..kbasis.len()).collect();
    if order == PivotOrder::Descending {
        kbasis.reverse();
        kperm.reverse();
    }
    let ibasis: Vec<Vec<Q>> = im.basis().to_vec();
    let columns: Vec<Vec<Q>> = kbasis.iter().chain(&ibasis).cloned().collect();
    let change = Matrix::from_columns((), dim, &columns);
    let split = change.inverse().ok_or_else(|| Error::Invariant(format!("degree {p} splitting is singular")))?;
    // ad on i in i-coordinates
    let kd = kbasis.len();
    let ad_cols: Vec<Vec<Q>> = ibasis.iter().map(|b| split.mul_vec(&m.mul_vec(b))[kd..].to_vec()).collect();
    let ad_i = Matrix::from_columns((), ibasis.len(), &ad_cols);
    let ad_i_inv = ad_i.inverse().ok_or(Error::NonSemisimple { degree: p })?;
    Ok(Piece { kbasis, kperm, ibasis, split, ad_i_inv })
}

fn lift(spec: RingSpec, x: &LinComb<Q>) -> AElement {
    x.map(|c| RingElem::from_rational(spec, c.clone()))
}

fn combination(p: i32, basis: &[Vec<Q>], coeffs: &[Q]) -> LinComb<Q> {
    let dim = 2 * (p as usize + 2);
    let mut out = vec![Q::zero(); dim];
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            if !x.is_zero() {
                *o += c * x;
            }
        }
    }
    LinComb::from_coords(p, &out)
}

/// Builds the first page: `N_p = T_p = ker ad(res v_0)` on each `G_p`.
pub fn first_page(v: &GradedField, n: i32) -> Result<PageState> {
    PageState::first_page(v, n, EngineConfig::default())
}

impl PageState {
    pub fn first_page(v: &GradedField, n: i32, config: EngineConfig) -> Result<Self> {
        validate(v, n)?;
        let spec = v.spec();
        let v0 = v.linear_part();
        let res0 = v0.residue();
        for j in 1..spec.len() {
            let layer = LinComb::from_terms(v0.iter().map(|(t, c)| (*t, c.coeffs()[j].clone())));
            if !res0.bracket(&layer).is_zero() {
                return Err(Error::IncompatibleLinearPart);
            }
        }
        let mut pieces = Vec::with_capacity(n as usize + 1);
        for p in 0..=n {
            pieces.push(build_piece(&res0, p, config.pivot_order)?);
        }
        let mut trans = Vec::with_capacity(pieces.len());
        for (p, piece) in pieces.iter().enumerate() {
            let kd = piece.kdim();
            let rows = (0..kd)
                .map(|i| {
                    let mut key = vec![Q::zero(); kd];
                    key[i] = Q::from_integer(1.into());
                    ChainRow { key, tail: Vec::new(), chain: LinComb::from_coords(p as i32, &piece.kbasis[i]) }
                })
                .collect();
            trans.push(rows);
        }
        let truncated = v.truncated(n);
        Ok(PageState {
            spec,
            n,
            r: 1,
            normalized_through: 0,
            config,
            residue: truncated.residue_element(),
            field: truncated,
            ad_i_inv_r: vec![None; pieces.len()],
            image: vec![Vec::new(); pieces.len()],
            pieces,
            trans,
            log: Vec::new(),
        })
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn truncation(&self) -> i32 {
        self.n
    }

    /// Current page index `r`.
    pub fn page(&self) -> i32 {
        self.r
    }

    pub fn normalized_through(&self) -> i32 {
        self.normalized_through
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    pub fn field(&self) -> &GradedField {
        &self.field
    }

    pub fn log(&self) -> &[TransformGenerator] {
        &self.log
    }

    fn piece(&self, p: i32) -> &Piece {
        &self.pieces[p as usize]
    }

    /// `dim ker ad(res v_0)` on `G_p`.
    pub fn kernel_dim(&self, p: i32) -> usize {
        self.piece(p).kdim()
    }

    pub fn normal_dim(&self, p: i32) -> usize {
        self.piece(p).kdim() - self.image[p as usize].len()
    }

    pub fn transform_dim(&self, p: i32) -> usize {
        self.trans[p as usize].len()
    }

    /// Kernel basis vectors in canonical order (grade coordinates).
    pub fn kernel_basis(&self, p: i32) -> Vec<LinComb<Q>> {
        let piece = self.piece(p);
        let mut items: Vec<(usize, &Vec<Q>)> = piece.kperm.iter().copied().zip(&piece.kbasis).collect();
        items.sort_by_key(|(k, _)| *k);
        items.into_iter().map(|(_, b)| LinComb::from_coords(p, b)).collect()
    }

    /// Working position of the canonical kernel direction `j`.
    fn working_index(&self, p: i32, j: usize) -> usize {
        self.piece(p).kperm.iter().position(|&k| k == j).expect("kernel index in range")
    }

    /// Canonical kernel directions used as pivots of the accumulated image.
    pub fn image_pivots(&self, p: i32) -> Vec<usize> {
        let piece = self.piece(p);
        self.image[p as usize].iter().filter_map(|r| r.pivot()).map(|i| piece.kperm[i]).collect()
    }

    /// Canonical kernel directions that are pivots of the transformation space.
    pub fn transform_pivots(&self, p: i32) -> Vec<usize> {
        let piece = self.piece(p);
        self.trans[p as usize].iter().filter_map(|r| r.pivot()).map(|i| piece.kperm[i]).collect()
    }

    /// Coefficient of the canonical kernel direction `j` in the degree-`p`
    /// part of the field.
    pub fn kernel_coordinate(&self, p: i32, j: usize) -> RingElem {
        let piece = self.piece(p);
        let x = self.field.element().coords(p, &RingElem::zero(self.spec));
        let (k, _) = piece.split_r(&x, self.spec);
        k[self.working_index(p, j)].clone()
    }

    /// `N_p` as a subspace of `G_p` (residue field).
    pub fn normal_space(&self, p: i32) -> Subspace {
        let piece = self.piece(p);
        let pivots: Vec<usize> = self.image[p as usize].iter().filter_map(|r| r.pivot()).collect();
        let dim = 2 * (p as usize + 2);
        Subspace::span(
            dim,
            (0..piece.kdim()).filter(|i| !pivots.contains(i)).map(|i| piece.kbasis[i].clone()).collect::<Vec<_>>(),
        )
    }

    /// `T_p` (leading parts of the transformations) as a subspace of `G_p`.
    pub fn transform_space(&self, p: i32) -> Subspace {
        let piece = self.piece(p);
        let dim = 2 * (p as usize + 2);
        Subspace::span(
            dim,
            self.trans[p as usize]
                .iter()
                .map(|r| combination(p, &piece.kbasis, &r.key).coords(p, &Q::zero()))
                .collect::<Vec<_>>(),
        )
    }

    /// Accumulated image in `G_p`: the first-page image plus everything hit
    /// by differentials so far.
    pub fn image_space(&self, p: i32) -> Subspace {
        let piece = self.piece(p);
        let dim = 2 * (p as usize + 2);
        let rows = self.image[p as usize].iter().map(|r| combination(p, &piece.kbasis, &r.key).coords(p, &Q::zero()));
        Subspace::span(dim, piece.ibasis.iter().cloned().chain(rows).collect::<Vec<_>>())
    }

    /// Full chains carried by the transformation space at degree `p`.
    pub fn transform_chains(&self, p: i32) -> Vec<LinComb<Q>> {
        self.trans[p as usize].iter().map(|r| r.chain.clone()).collect()
    }

    /// Chains whose brackets span the accumulated image at degree `p`.
    pub fn image_chains(&self, p: i32) -> Vec<LinComb<Q>> {
        self.image[p as usize].iter().map(|r| r.chain.clone()).collect()
    }

    /// Projection of a degree-`target` residue vector onto the current
    /// normal-form directions (as kernel coordinates, before reduction).
    fn kernel_part(&self, target: i32, y: &LinComb<Q>) -> Vec<Q> {
        let (k, _) = self.piece(target).split_q(&y.coords(target, &Q::zero()));
        k
    }

    /// The differential `d_p^r` of the current page.
    pub fn differential(&self, p: i32) -> Result<Differential> {
        let target = p + self.r;
        if p < 1 || target > self.n {
            return Err(Error::InvalidTruncation(format!(
                "differential from degree {p} on page {} leaves degree range",
                self.r
            )));
        }
        let image = &self.image[target as usize];
        let pivots: Vec<usize> = image.iter().filter_map(|r| r.pivot()).collect();
        let tpiece = self.piece(target);
        let free: Vec<usize> = (0..tpiece.kdim()).filter(|i| !pivots.contains(i)).collect();
        let mut columns = Vec::new();
        let mut domain = Vec::new();
        for row in &self.trans[p as usize] {
            let mut y = self.kernel_part(target, &self.residue.bracket_at_degree(&row.chain, target));
            for (irow, &pc) in image.iter().zip(&pivots) {
                if !y[pc].is_zero() {
                    let a = y[pc].clone();
                    for (x, z) in y.iter_mut().zip(&irow.key) {
                        *x -= &a * z;
                    }
                }
            }
            columns.push(free.iter().map(|&i| y[i].clone()).collect::<Vec<_>>());
            domain.push(row.chain.part(p));
        }
        let codomain = free.iter().map(|&i| LinComb::from_coords(target, &tpiece.kbasis[i])).collect();
        Ok(Differential { matrix: Matrix::from_columns((), free.len(), &columns), domain, codomain })
    }

    /// Replaces `E_r` by `E_{r+1}`: kernels of the differentials become the
    /// new transformation spaces, images are divided out of the targets.
    pub fn turn_page(&mut self) {
        let r = self.r;
        for p in 1..=(self.n - r) {
            let target = p + r;
            let rows = std::mem::take(&mut self.trans[p as usize]);
            let mut candidates = Vec::with_capacity(rows.len());
            for row in rows {
                candidates.push(self.bracket_row(row, target));
            }
            let (new_image, kernel) = rref(candidates);
            let (kernel, _) =
                rref(kernel.into_iter().map(|r| ChainRow { key: r.tail, tail: Vec::new(), chain: r.chain }).collect());
            self.trans[p as usize] = kernel;
            let existing = &mut self.image[target as usize];
            for new in &new_image {
                let pc = new.pivot().expect("pivot row");
                let new = ChainRow { key: new.key.clone(), tail: Vec::new(), chain: new.chain.clone() };
                for old in existing.iter_mut() {
                    if !old.key[pc].is_zero() {
                        let a = old.key[pc].clone();
                        old.sub_scaled(&a, &new);
                    }
                }
            }
            existing.extend(new_image.into_iter().map(|r| ChainRow { key: r.key, tail: Vec::new(), chain: r.chain }));
            existing.sort_by_key(|r| r.pivot());
        }
        self.r += 1;
    }

    /// Computes the degree-`target` bracket of a transformation row, fixes
    /// its `i`-component by a correction of the chain, and reduces its kernel
    /// part by the accumulated image. The result has `key` = reduced image
    /// coordinates and `tail` = the old transformation coordinates.
    fn bracket_row(&self, row: ChainRow, target: i32) -> ChainRow {
        let piece = self.piece(target);
        let y = self.residue.bracket_at_degree(&row.chain, target);
        let (k, i) = piece.split_q(&y.coords(target, &Q::zero()));
        let mut chain = row.chain;
        if i.iter().any(|x| !x.is_zero()) {
            let z = piece.ad_i_inv.mul_vec(&i);
            chain = chain.sub(&combination(target, &piece.ibasis, &z));
        }
        let mut out = ChainRow { key: k, tail: row.key, chain: chain.truncated(self.n) };
        for irow in &self.image[target as usize] {
            let pc = irow.pivot().expect("pivot row");
            if !out.key[pc].is_zero() {
                let a = out.key[pc].clone();
                // image rows carry no tail, so the tail is left alone
                out.sub_scaled(&a, irow);
            }
        }
        out
    }

    fn ad_i_inverse_over_ring(&mut self, p: i32) -> Result<Matrix<RingElem>> {
        if let Some(m) = &self.ad_i_inv_r[p as usize] {
            return Ok(m.clone());
        }
        let spec = self.spec;
        let piece = self.piece(p);
        let kd = piece.kdim();
        let v0 = self.field.linear_part();
        let full = ad_matrix(&v0, p, p, spec);
        let split = piece.split.map(spec, |q| RingElem::from_rational(spec, q.clone()));
        let cols: Vec<Vec<RingElem>> = piece
            .ibasis
            .iter()
            .map(|b| {
                let b: Vec<RingElem> = b.iter().map(|q| RingElem::from_rational(spec, q.clone())).collect();
                split.mul_vec(&full.mul_vec(&b))[kd..].to_vec()
            })
            .collect();
        let m = Matrix::from_columns(spec, piece.ibasis.len(), &cols);
        let inv = m.inverse().ok_or(Error::NonSemisimple { degree: p })?;
        self.ad_i_inv_r[p as usize] = Some(inv.clone());
        Ok(inv)
    }

    fn apply(&mut self, t: &AElement) -> Result<()> {
        self.field = exp_ad(t, &self.field, self.n)?;
        self.residue = self.field.residue_element();
        Ok(())
    }

    /// Normalizes the degree-`d` part of the field: removes the `i`-part with
    /// a degree-`d` generator, then clears the image pivots using the chains
    /// of the accumulated image. Requires the page index to equal `d`.
    pub fn normalize_degree(&mut self, d: i32) -> Result<()> {
        if d != self.r || d != self.normalized_through + 1 || d > self.n {
            return Err(Error::Invariant(format!(
                "normalize_degree({d}) on page {} after degree {}",
                self.r, self.normalized_through
            )));
        }
        let spec = self.spec;
        let zero = RingElem::zero(spec);
        let rounds = spec.len() + 1;
        for _ in 0..rounds {
            let mut changed = false;
            let x = self.field.element().coords(d, &zero);
            let (_, i) = self.piece(d).split_r(&x, spec);
            if i.iter().any(|c| !c.is_zero()) {
                let inv = self.ad_i_inverse_over_ring(d)?;
                let tau = inv.mul_vec(&i);
                let piece = self.piece(d);
                let mut t = AElement::zero();
                for (c, b) in tau.iter().zip(&piece.ibasis) {
                    if !c.is_zero() {
                        t.add_assign(
                            &LinComb::from_coords(d, b).map(|q| RingElem::from_rational(spec, q.clone())).scale(c),
                        );
                    }
                }
                self.apply(&t)?;
                self.log.push(TransformGenerator { element: t, degree: d, page: 0 });
                changed = true;
            }
            let x = self.field.element().coords(d, &zero);
            let (k, _) = self.piece(d).split_r(&x, spec);
            let mut t = AElement::zero();
            let mut generators = Vec::new();
            for row in &self.image[d as usize] {
                let pc = row.pivot().expect("pivot row");
                if k[pc].is_zero() {
                    continue;
                }
                let g = lift(spec, &row.chain).scale(&k[pc]);
                t.add_assign(&g);
                let degree = row.chain.min_degree().unwrap_or(d);
                generators.push(TransformGenerator { element: g, degree, page: d - degree });
            }
            if !generators.is_empty() {
                self.apply(&t)?;
                self.log.extend(generators);
                changed = true;
            }
            if !changed {
                self.normalized_through = d;
                return Ok(());
            }
        }
        Err(Error::Invariant(format!("degree {d} did not normalize within {rounds} rounds")))
    }

    /// Degree-by-degree driver: normalize degree `r`, then turn page `r`.
    pub fn run(&mut self) -> Result<()> {
        while self.normalized_through < self.n {
            self.normalize_degree(self.r)?;
            self.turn_page();
        }
        Ok(())
    }
}

/// The unique normal form through degree `n`, with the final page and log.
pub fn unique_normal_form(v: &GradedField, n: i32, config: EngineConfig) -> Result<NormalForm> {
    let mut state = PageState::first_page(v, n, config)?;
    state.run()?;
    Ok(NormalForm { field: state.field.clone(), log: state.log.clone(), state })
}

/// Runs the driver until the state sits at page `r` with degrees `< r`
/// normalized and turned, and degree `r` normalized.
pub fn advance_to_page(v: &GradedField, n: i32, r: i32, config: EngineConfig) -> Result<PageState> {
    if r < 1 || r > n {
        return Err(Error::InvalidTruncation(format!("page {r} outside 1..={n}")));
    }
    let mut state = PageState::first_page(v, n, config)?;
    for d in 1..r {
        state.normalize_degree(d)?;
        state.turn_page();
    }
    state.normalize_degree(r)?;
    Ok(state)
}
