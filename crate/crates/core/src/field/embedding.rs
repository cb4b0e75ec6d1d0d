use num_rational::BigRational;
use num_traits::Zero;

use super::{FieldElement, NumberField};
use crate::error::{Error, Result};
use crate::exact::matrix::solve;

/// A field embedding `K -> G`, fixed by the image of the generator of `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldEmbedding {
    k: NumberField,
    g: NumberField,
    image: FieldElement,
    /// Images of `1, t, ..., t^(dK-1)` in G.
    powers: Vec<FieldElement>,
}

impl FieldEmbedding {
    /// Checks that `image` (an element of `g`) is a root of the defining polynomial of `k`.
    pub fn new(k: &NumberField, g: &NumberField, image: FieldElement) -> Result<Self> {
        if image.field() != g {
            return Err(Error::FieldMismatch);
        }
        if g.degree() % k.degree() != 0 {
            return Err(Error::InvalidEmbedding(format!(
                "degree {} does not divide degree {}",
                k.degree(),
                g.degree()
            )));
        }
        let mut value = g.zero();
        for c in k.poly().iter().rev() {
            value = &(&value * &image) + &FieldElement::from_int(g, c.clone());
        }
        if !value.is_zero() {
            return Err(Error::InvalidEmbedding(format!(
                "{} is not a root of {}",
                image,
                k.label()
            )));
        }
        let mut powers = Vec::with_capacity(k.degree());
        let mut cur = g.one();
        for _ in 0..k.degree() {
            powers.push(cur.clone());
            cur = &cur * &image;
        }
        Ok(FieldEmbedding {
            k: k.clone(),
            g: g.clone(),
            image,
            powers,
        })
    }

    /// The identity map of a field.
    pub fn identity(k: &NumberField) -> Self {
        FieldEmbedding::new(k, k, k.generator()).expect("generator is a root of its own polynomial")
    }

    /// The inclusion of the rationals into `g`.
    pub fn from_rationals(g: &NumberField) -> Self {
        FieldEmbedding::new(&NumberField::rationals(), g, g.zero())
            .expect("zero is the root of t")
    }

    pub fn source(&self) -> &NumberField {
        &self.k
    }

    pub fn target(&self) -> &NumberField {
        &self.g
    }

    pub fn image_of_generator(&self) -> &FieldElement {
        &self.image
    }

    /// `[G:K]`
    pub fn relative_degree(&self) -> usize {
        self.g.degree() / self.k.degree()
    }

    pub fn push(&self, a: &FieldElement) -> FieldElement {
        assert!(a.field() == &self.k, "element is not in the source field");
        let mut out = self.g.zero();
        for (c, p) in a.coords().iter().zip(&self.powers) {
            if !c.is_zero() {
                out = &out + &p.scale(c);
            }
        }
        out
    }

    /// Preimage of an element of `G`; `EmbeddingUndefined` when it is not in `K`.
    pub fn pull(&self, b: &FieldElement) -> Result<FieldElement> {
        if b.field() != &self.g {
            return Err(Error::FieldMismatch);
        }
        if self.k.degree() == self.g.degree() && self.k == self.g && self.image == self.g.generator() {
            return Ok(b.clone());
        }
        if self.k.is_rationals() {
            return b
                .as_rational()
                .map(|r| FieldElement::from_rational(&self.k, r))
                .ok_or(Error::EmbeddingUndefined);
        }
        let rows: Vec<Vec<BigRational>> = (0..self.g.degree())
            .map(|i| self.powers.iter().map(|p| p.coords()[i].clone()).collect())
            .collect();
        solve(&rows, b.coords())
            .map(|c| FieldElement::from_coords(&self.k, c))
            .ok_or(Error::EmbeddingUndefined)
    }
}
